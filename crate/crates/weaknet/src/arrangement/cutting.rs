//! Seeded sample cuttings: draw r of the m input hyperplanes, triangulate
//! the sample's boxed arrangement bottom-vertex style, certify the crossing
//! bound by exact counting (resampling on failure), then refine cells
//! holding too many points with vertical walls.

use super::{
    bottom_vertex_triangulate, build_arrangement, ArrangementError, BoxBounds, Located,
};
use crate::geom::{point_in_simplex_closed, Hyperplane, Point, Simplex};
use crate::scalar::{det_rat, rat, Rat, Sign};
use crate::schedule::Schedule;
use crate::util::derive_seed;
use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};

/// Axis-aligned slab: the band between two vertical walls on one axis.
/// `None` bounds are open ends.
#[derive(Clone, Debug)]
pub struct Slab {
    pub axis: usize,
    pub lo: Option<Rat>,
    pub hi: Option<Rat>,
}

impl Slab {
    pub fn admits(&self, p: &Point) -> bool {
        self.lo.as_ref().map_or(true, |w| p.coord(self.axis) >= w)
            && self.hi.as_ref().map_or(true, |w| p.coord(self.axis) <= w)
    }
}

/// One cell of the cutting: a simplex of the triangulated sample
/// arrangement, optionally restricted to a slab by heavy refinement.
#[derive(Clone, Debug)]
pub struct CuttingCell {
    /// The originating simplex of the triangulation.
    pub simplex: Simplex,
    /// Index of the arrangement cell the simplex came from.
    pub cell: usize,
    /// Wall restriction; `None` for unrefined cells.
    pub slab: Option<Slab>,
    /// Vertices of the (possibly clipped) region.
    pub region_vertices: Vec<Point>,
    /// True when this cell is a slice of a refined heavy simplex.
    pub heavy: bool,
    /// Input hyperplane ids crossing the region's interior.
    pub crossing: Vec<u32>,
    /// Input point ids assigned to the region.
    pub points: Vec<u32>,
}

/// A certified cutting: the sample, its refined cells, and the measured
/// crossing statistics of the accepted attempt.
#[derive(Clone, Debug)]
pub struct Cutting {
    /// Sorted indices of the sampled hyperplanes.
    pub sample: Vec<u32>,
    pub cells: Vec<CuttingCell>,
    pub z: usize,
    /// Attempts consumed, counting the accepted one.
    pub attempts: u32,
    /// Largest per-simplex crossing count before refinement.
    pub max_crossing: usize,
    /// The bound the acceptance test enforced.
    pub crossing_bound: f64,
    /// Point ids lying on some sampled hyperplane; they belong to no cell.
    pub boundary_points: Vec<u32>,
}

impl Cutting {
    pub fn dump_json(&self) -> serde_json::Value {
        json!({
            "sample": self.sample,
            "z": self.z,
            "attempts": self.attempts,
            "max_crossing": self.max_crossing,
            "crossing_bound": self.crossing_bound,
            "boundary_points": self.boundary_points,
            "cells": self.cells.iter().map(|c| json!({
                "vertices": c.region_vertices.iter()
                    .map(|p| p.coords().iter().map(Rat::to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "heavy": c.heavy,
                "crossing_count": c.crossing.len(),
                "point_count": c.points.len(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Number of slices a heavy cell of `cnt` points splits into. The first
/// term is the proportional count; the second guards the corner where
/// balanced slices of that count would still exceed ⌊n/z⌋ points.
fn part_count(cnt: usize, n: usize, z: usize) -> usize {
    let proportional = ((cnt as u128) * (z as u128)).div_ceil(n as u128) as usize;
    let cap = (n / z).max(1);
    proportional.max(cnt.div_ceil(cap))
}

/// Builds a cutting of `hyperplanes` from an r-sample, refined so no cell
/// keeps more than ⌊n/z⌋ of `points`. Resamples until every simplicial
/// cell is crossed by at most (d+1)·C·(m/r)·ln r hyperplanes.
pub fn build_cutting(
    hyperplanes: &[Hyperplane],
    r: usize,
    points: &[Point],
    z: usize,
    seed: u64,
    sched: &Schedule,
) -> Result<Cutting, ArrangementError> {
    let m = hyperplanes.len();
    if m == 0 {
        return Err(ArrangementError::BadInput("no hyperplanes to cut".into()));
    }
    let d = hyperplanes[0].dim();
    if d != 2 && d != 3 {
        return Err(ArrangementError::BadInput(format!(
            "cuttings support dimensions 2 and 3, got {d}"
        )));
    }
    if hyperplanes.iter().any(|h| h.dim() != d) {
        return Err(ArrangementError::BadInput(
            "hyperplane dimensions disagree".into(),
        ));
    }
    if points.iter().any(|p| p.dim() != d) {
        return Err(ArrangementError::BadInput(
            "point dimension does not match the hyperplanes".into(),
        ));
    }
    if r == 0 || r > m {
        return Err(ArrangementError::BadInput(format!(
            "sample size {r} outside 1..={m}"
        )));
    }
    if z == 0 {
        return Err(ArrangementError::BadInput("z must be at least 1".into()));
    }

    let bound =
        (d as f64 + 1.0) * sched.cutting_c * (m as f64 / r as f64) * (r as f64).ln();
    let mut last_reason = String::from("no attempts configured");

    for attempt in 0..sched.cutting_attempts {
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(seed, "cutting-sample", attempt as u64));
        let mut sample: Vec<u32> = if r == m {
            (0..m as u32).collect()
        } else {
            rand::seq::index::sample(&mut rng, m, r)
                .into_iter()
                .map(|i| i as u32)
                .collect()
        };
        sample.sort_unstable();
        let sampled: Vec<&Hyperplane> = sample.iter().map(|&i| &hyperplanes[i as usize]).collect();
        let sample_owned: Vec<Hyperplane> = sampled.iter().map(|&h| h.clone()).collect();

        // The box must cover the points and every vertex of the sample's
        // arrangement, so no bounded structure is clipped away.
        let mut anchors: Vec<Point> = points.to_vec();
        anchors.extend(sample_vertices(&sampled, d));
        let mut bounds = BoxBounds::covering(anchors.iter(), d, 4)?;

        // A hyperplane through a box-made vertex is a box artifact; widen
        // and retry before giving up on the sample.
        let mut arr = None;
        for _ in 0..8 {
            match build_arrangement(&sample_owned, &bounds) {
                Ok(a) => {
                    arr = Some(a);
                    break;
                }
                Err(ArrangementError::BoxClash { .. }) => bounds = bounds.widened(),
                Err(ArrangementError::Degenerate { tuple, detail }) => {
                    last_reason = format!(
                        "degenerate sample {:?}: {detail}",
                        tuple.iter().map(|&i| sample[i as usize]).collect::<Vec<_>>()
                    );
                    arr = None;
                    break;
                }
                Err(other) => return Err(other),
            }
        }
        let Some(arr) = arr else {
            if !last_reason.starts_with("degenerate") {
                last_reason = "box kept clashing with the sample".into();
            }
            continue;
        };

        let simplices = match bottom_vertex_triangulate(&arr) {
            Ok(s) => s,
            Err(ArrangementError::Horizontal { index }) => {
                last_reason = format!("sampled hyperplane {} is horizontal", sample[index as usize]);
                continue;
            }
            Err(other) => return Err(other),
        };
        if z > 2 * simplices.len() {
            return Err(ArrangementError::BadInput(format!(
                "z = {z} exceeds twice the cell count {}",
                simplices.len()
            )));
        }

        // Exact crossing certification: a hyperplane crosses a simplex's
        // interior iff the vertex signs are strictly mixed.
        let mut uniq: BTreeMap<Point, usize> = BTreeMap::new();
        let mut vert_list: Vec<Point> = Vec::new();
        let simp_verts: Vec<Vec<usize>> = simplices
            .iter()
            .map(|sc| {
                sc.simplex
                    .vertices()
                    .iter()
                    .map(|v| {
                        *uniq.entry(v.clone()).or_insert_with(|| {
                            vert_list.push(v.clone());
                            vert_list.len() - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let mut in_sample = vec![false; m];
        for &i in &sample {
            in_sample[i as usize] = true;
        }
        let mut crossings: Vec<Vec<u32>> = vec![Vec::new(); simplices.len()];
        for (h_idx, h) in hyperplanes.iter().enumerate() {
            if in_sample[h_idx] {
                continue;
            }
            let sides: Vec<Sign> = vert_list.iter().map(|p| h.side(p)).collect();
            for (si, ids) in simp_verts.iter().enumerate() {
                let mut pos = false;
                let mut neg = false;
                for &vid in ids {
                    match sides[vid] {
                        Sign::Pos => pos = true,
                        Sign::Neg => neg = true,
                        Sign::Zero => {}
                    }
                }
                if pos && neg {
                    crossings[si].push(h_idx as u32);
                }
            }
        }
        let max_crossing = crossings.iter().map(Vec::len).max().unwrap_or(0);
        if (max_crossing as f64) > bound + 1e-9 {
            last_reason = format!("max crossing {max_crossing} above bound {bound:.2}");
            continue;
        }

        // Point assignment: each point off the sample lies in exactly one
        // cell, hence in some closed simplex of that cell's fan.
        let mut cell_simplices: Vec<Vec<usize>> = vec![Vec::new(); arr.cells().len()];
        for (si, sc) in simplices.iter().enumerate() {
            cell_simplices[sc.cell].push(si);
        }
        let mut simplex_points: Vec<Vec<u32>> = vec![Vec::new(); simplices.len()];
        let mut boundary_points: Vec<u32> = Vec::new();
        'points: for (pi, p) in points.iter().enumerate() {
            for h in &sampled {
                if h.side(p) == Sign::Zero {
                    boundary_points.push(pi as u32);
                    continue 'points;
                }
            }
            match arr.locate(p) {
                Located::Cell(ci) => {
                    let mut placed = false;
                    for &si in &cell_simplices[ci] {
                        if point_in_simplex_closed(p, simplices[si].simplex.vertices())? {
                            simplex_points[si].push(pi as u32);
                            placed = true;
                            break;
                        }
                    }
                    if !placed {
                        return Err(ArrangementError::BadInput(format!(
                            "point {pi} escaped the triangulation of its cell"
                        )));
                    }
                }
                // Grazing the box counts as boundary; the box has margin,
                // so this needs a point placed exactly on a box plane.
                Located::OnHyperplane(_) => boundary_points.push(pi as u32),
                Located::OutsideBox => {
                    return Err(ArrangementError::BadInput(format!(
                        "point {pi} fell outside the covering box"
                    )));
                }
            }
        }

        let n = points.len();
        let threshold = if n == 0 { usize::MAX } else { n.div_ceil(z) };
        let cap = if n == 0 { usize::MAX } else { (n / z).max(1) };
        let mut cells = Vec::new();
        for (si, sc) in simplices.iter().enumerate() {
            let ids = &simplex_points[si];
            if n > 0 && ids.len() >= threshold {
                let parts = part_count(ids.len(), n, z);
                cells.extend(refine_heavy(
                    &sc.simplex,
                    sc.cell,
                    ids,
                    points,
                    cap,
                    parts,
                    hyperplanes,
                    &crossings[si],
                )?);
            } else {
                cells.push(CuttingCell {
                    simplex: sc.simplex.clone(),
                    cell: sc.cell,
                    slab: None,
                    region_vertices: sc.simplex.vertices().to_vec(),
                    heavy: false,
                    crossing: crossings[si].clone(),
                    points: ids.clone(),
                });
            }
        }

        return Ok(Cutting {
            sample,
            cells,
            z,
            attempts: attempt + 1,
            max_crossing,
            crossing_bound: bound,
            boundary_points,
        });
    }

    Err(ArrangementError::Budget {
        what: format!("cutting resamples ({last_reason})"),
        limit: sched.cutting_attempts as u128,
        got: sched.cutting_attempts as u128,
    })
}

/// All points where d sampled hyperplanes meet, by Cramer's rule; singular
/// tuples contribute nothing.
fn sample_vertices(sampled: &[&Hyperplane], d: usize) -> Vec<Point> {
    let r = sampled.len();
    let mut out = Vec::new();
    let mut pick = vec![0usize; d];
    let mut solve = |idx: &[usize]| {
        let rows: Vec<Vec<Rat>> = idx.iter().map(|&i| sampled[i].normal().to_vec()).collect();
        let det = det_rat(&rows);
        if det.is_zero() {
            return;
        }
        let mut coords = Vec::with_capacity(d);
        for j in 0..d {
            let mut mj = rows.clone();
            for (row, &i) in idx.iter().enumerate() {
                mj[row][j] = sampled[i].offset().clone();
            }
            coords.push(det_rat(&mj) / &det);
        }
        out.push(Point::new(coords));
    };
    if d == 2 {
        for i in 0..r {
            for j in i + 1..r {
                pick[0] = i;
                pick[1] = j;
                solve(&pick);
            }
        }
    } else {
        for i in 0..r {
            for j in i + 1..r {
                for k in j + 1..r {
                    pick[0] = i;
                    pick[1] = j;
                    pick[2] = k;
                    solve(&pick);
                }
            }
        }
    }
    out
}

/// Splits a heavy simplex into `parts` slabs of a horizontal axis, each
/// holding at most `cap` points. Walls fall at midpoints between adjacent
/// point coordinates, so equal coordinates never straddle a wall.
#[allow(clippy::too_many_arguments)]
fn refine_heavy(
    simplex: &Simplex,
    cell: usize,
    ids: &[u32],
    points: &[Point],
    cap: usize,
    parts: usize,
    hyperplanes: &[Hyperplane],
    parent_crossing: &[u32],
) -> Result<Vec<CuttingCell>, ArrangementError> {
    let d = simplex.dim();
    let mut axis = 0usize;
    let mut best_distinct = 0usize;
    for cand in 0..d - 1 {
        let mut vals: Vec<&Rat> = ids.iter().map(|&i| points[i as usize].coord(cand)).collect();
        vals.sort_unstable();
        vals.dedup();
        if vals.len() > best_distinct {
            best_distinct = vals.len();
            axis = cand;
        }
        if vals.len() == ids.len() {
            break;
        }
    }

    let mut order: Vec<u32> = ids.to_vec();
    order.sort_by(|&a, &b| {
        points[a as usize]
            .coord(axis)
            .cmp(points[b as usize].coord(axis))
            .then(a.cmp(&b))
    });
    let values: Vec<&Rat> = order.iter().map(|&i| points[i as usize].coord(axis)).collect();
    let ends = split_positions(&values, parts, cap)?;

    let mut out = Vec::with_capacity(ends.len());
    let mut start = 0usize;
    for (pi, &end) in ends.iter().enumerate() {
        let lo = if pi == 0 {
            None
        } else {
            Some((values[start - 1] + values[start]) / rat(2))
        };
        let hi = if pi + 1 == ends.len() {
            None
        } else {
            Some((values[end - 1] + values[end]) / rat(2))
        };
        let slab = Slab { axis, lo, hi };
        let region = clip_simplex_to_slab(simplex.vertices(), &slab);
        let crossing: Vec<u32> = parent_crossing
            .iter()
            .copied()
            .filter(|&h| {
                let mut pos = false;
                let mut neg = false;
                for p in &region {
                    match hyperplanes[h as usize].side(p) {
                        Sign::Pos => pos = true,
                        Sign::Neg => neg = true,
                        Sign::Zero => {}
                    }
                }
                pos && neg
            })
            .collect();
        let mut part_ids = order[start..end].to_vec();
        part_ids.sort_unstable();
        out.push(CuttingCell {
            simplex: simplex.clone(),
            cell,
            slab: Some(slab),
            region_vertices: region,
            heavy: true,
            crossing,
            points: part_ids,
        });
        start = end;
    }
    Ok(out)
}

/// Exclusive end positions of consecutive nonempty slices of the sorted
/// coordinate list. Boundaries snap to the nearest position where the value
/// changes, so ties stay together; a tie run larger than `cap` is
/// unsplittable and rejected.
fn split_positions(
    values: &[&Rat],
    parts: usize,
    cap: usize,
) -> Result<Vec<usize>, ArrangementError> {
    let cnt = values.len();
    let edges: Vec<usize> = (1..cnt).filter(|&i| values[i] != values[i - 1]).collect();
    let mut bounds: Vec<usize> = Vec::new();
    let mut prev = 0usize;
    for i in 1..parts {
        let target = (cnt * i + parts / 2) / parts;
        let from = edges.partition_point(|&e| e <= prev);
        if from == edges.len() {
            break;
        }
        let at = edges[from..].partition_point(|&e| e < target) + from;
        let lower = if at > from { Some(edges[at - 1]) } else { None };
        let upper = if at < edges.len() { Some(edges[at]) } else { None };
        let pick = match (lower, upper) {
            (Some(l), Some(u)) => {
                if target - l <= u - target {
                    l
                } else {
                    u
                }
            }
            (Some(l), None) => l,
            (None, Some(u)) => u,
            (None, None) => break,
        };
        bounds.push(pick);
        prev = pick;
    }
    bounds.push(cnt);
    let mut start = 0usize;
    for &end in &bounds {
        if end - start > cap {
            return Err(ArrangementError::BadInput(format!(
                "tied coordinates force a slice of {} points past the capacity {cap}",
                end - start
            )));
        }
        start = end;
    }
    Ok(bounds)
}

/// Vertices of the simplex clipped to the slab: inside-or-on vertices plus
/// edge crossings with each present wall.
fn clip_simplex_to_slab(verts: &[Point], slab: &Slab) -> Vec<Point> {
    let d = verts[0].dim();
    let mut set: BTreeSet<Point> = verts.iter().filter(|p| slab.admits(p)).cloned().collect();
    for wall in [&slab.lo, &slab.hi].into_iter().flatten() {
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let a = verts[i].coord(slab.axis);
                let b = verts[j].coord(slab.axis);
                if (a < wall && b > wall) || (a > wall && b < wall) {
                    let t = (wall - a) / (b - a);
                    let p = Point::new(
                        (0..d)
                            .map(|k| {
                                verts[i].coord(k) + &t * &(verts[j].coord(k) - verts[i].coord(k))
                            })
                            .collect(),
                    );
                    if slab.admits(&p) {
                        set.insert(p);
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}
