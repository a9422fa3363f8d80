//! Brute-force ground truth: exhaustive and adversarial net verification,
//! pierce counting, optimal-piercing enumeration, vertical-convexity
//! measurement, and seeded instance generators. Everything here is written
//! for auditability at small scale, not for speed at pipeline scale.

mod gen;
mod verify;

pub use gen::{generate_points, GenKind, GeneratorSpec};
pub use verify::{
    verify_weak_net, Certificate, SubsetFilter, VerifyMode, VerifyReport, Violation,
};

use crate::geom::{
    affine_rank, point_in_hull, point_in_simplex_closed, point_strictly_in_simplex, GeomError,
    Hyperplane, HullPosition, Point, Simplex, VerticalLine,
};
use crate::scalar::{dot, Rat};
use crate::util::{binomial, for_each_subset};
use num::{One, Signed, Zero};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("budget exceeded for {what}: needs {got}, cap {limit}")]
    Budget { what: String, limit: u128, got: u128 },
    #[error("bad oracle input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// Target of a piercing query: a full-dimensional point or a vertical line.
#[derive(Clone, Debug)]
pub enum PierceTarget {
    Point(Point),
    Line(VerticalLine),
}

/// Exact number of simplices in `t` whose closed hull contains the target.
/// A vertical line meets a hull iff its base lies in the projected hull, so
/// simplices with vertical supporting hyperplanes are handled uniformly.
pub fn pierce_count(target: &PierceTarget, t: &[Simplex]) -> Result<usize, OracleError> {
    let mut count = 0;
    for tau in t {
        let hit = match target {
            PierceTarget::Point(q) => {
                if q.dim() != tau.dim() {
                    return Err(GeomError::DimensionMismatch {
                        expected: q.dim(),
                        got: tau.dim(),
                    }
                    .into());
                }
                point_in_simplex_closed(q, tau.vertices())?
            }
            PierceTarget::Line(line) => {
                if line.dim() != tau.dim() {
                    return Err(GeomError::DimensionMismatch {
                        expected: line.dim(),
                        got: tau.dim(),
                    }
                    .into());
                }
                let projected: Vec<Point> = tau.vertices().iter().map(|v| v.project()).collect();
                point_in_hull(line.base(), &projected)? != HullPosition::Outside
            }
        };
        if hit {
            count += 1;
        }
    }
    Ok(count)
}

/// A point maximizing the number of simplices pierced, with its exact count.
/// The count is taken at points avoiding every facet hyperplane, where open
/// and closed containment agree; the returned point lies in a cell of the
/// facet arrangement attaining that maximum.
#[derive(Clone, Debug)]
pub struct PiercingOptimum {
    pub point: Point,
    pub count: usize,
}

const PIERCE_SIMPLEX_CAP: usize = 5_000;
const PIERCE_CANDIDATE_CAP: usize = 2_000_000;

/// Maximizer of the piercing count over all points in general position with
/// respect to the facet hyperplanes of `t`. The count is constant on each
/// open cell of the facet arrangement, every cell with a positive count lies
/// inside some simplex and is therefore bounded, and each edge of a bounded
/// cell is a segment of one hyperplane between consecutive crossings with
/// the others. Midpoints of those segments, pushed halfway to the nearest
/// crossing on both sides, land inside every such cell; in R^3 the same
/// sweep runs inside each plane first and the in-plane cell points are then
/// pushed off the plane. Hyperplane-free barycenters are scanned ahead of
/// the sweep so a lone simplex reports its own center. Lists consisting
/// entirely of lower-dimensional simplices pierce no generic point at all
/// and fall back to boundary-inclusive counts at vertices and barycenters.
pub fn best_piercing_point(t: &[Simplex]) -> Result<PiercingOptimum, OracleError> {
    if t.is_empty() {
        return Err(OracleError::BadInput("no simplices to pierce".into()));
    }
    if t.len() > PIERCE_SIMPLEX_CAP {
        return Err(OracleError::Budget {
            what: "piercing simplex list".into(),
            limit: PIERCE_SIMPLEX_CAP as u128,
            got: t.len() as u128,
        });
    }
    let k = t[0].dim();
    for tau in t {
        if tau.dim() != k {
            return Err(GeomError::DimensionMismatch { expected: k, got: tau.dim() }.into());
        }
    }
    if k != 2 && k != 3 {
        return Err(OracleError::BadInput(format!(
            "piercing optimum supports dimensions 2 and 3, got {k}"
        )));
    }

    // Facet-spanning hyperplanes, deduplicated by a canonical scaling.
    let mut seen: HashSet<Vec<Rat>> = HashSet::new();
    let mut hyperplanes: Vec<Hyperplane> = Vec::new();
    for tau in t {
        let verts = tau.vertices();
        for_each_subset(verts.len(), k, |idx| {
            let refs: Vec<&Point> = idx.iter().map(|&i| &verts[i]).collect();
            if affine_rank(&refs) != k - 1 {
                return;
            }
            if let Ok(h) = Hyperplane::through_points(&refs, None) {
                if seen.insert(canonical_hyperplane_key(&h)) {
                    hyperplanes.push(h);
                }
            }
        });
    }

    let mut candidates: Vec<Point> = Vec::new();
    let mut seen_pts: HashSet<Point> = HashSet::new();
    let mut push = |p: Point, candidates: &mut Vec<Point>| -> Result<(), OracleError> {
        if candidates.len() >= PIERCE_CANDIDATE_CAP {
            return Err(OracleError::Budget {
                what: "piercing candidate enumeration".into(),
                limit: PIERCE_CANDIDATE_CAP as u128,
                got: candidates.len() as u128 + 1,
            });
        }
        if seen_pts.insert(p.clone()) {
            candidates.push(p);
        }
        Ok(())
    };

    for tau in t {
        if tau.k() != k {
            continue;
        }
        let b = barycenter(tau.vertices());
        if hyperplanes.iter().all(|h| !h.eval(&b).is_zero()) {
            push(b, &mut candidates)?;
        }
    }

    if k == 2 {
        let lines: Vec<Line2> = hyperplanes
            .iter()
            .map(|h| Line2 {
                n: [h.normal()[0].clone(), h.normal()[1].clone()],
                off: h.offset().clone(),
            })
            .collect();
        for uv in cell_interior_points_2d(&lines) {
            push(Point::new(uv.to_vec()), &mut candidates)?;
        }
    } else {
        for (a, h) in hyperplanes.iter().enumerate() {
            let (p0, e1, e2) = plane_frame(h);
            let mut seen_lines: HashSet<Vec<Rat>> = HashSet::new();
            let mut lines: Vec<Line2> = Vec::new();
            for (b, g) in hyperplanes.iter().enumerate() {
                if b == a {
                    continue;
                }
                let alpha = dot(g.normal(), &e1);
                let beta = dot(g.normal(), &e2);
                if alpha.is_zero() && beta.is_zero() {
                    continue;
                }
                let off = g.offset() - dot(g.normal(), p0.coords());
                let line = Line2 { n: [alpha, beta], off };
                if seen_lines.insert(line.canonical_key()) {
                    lines.push(line);
                }
            }
            for [u, v] in cell_interior_points_2d(&lines) {
                let on_plane: Vec<Rat> = (0..3)
                    .map(|j| p0.coord(j) + &u * &e1[j] + &v * &e2[j])
                    .collect();
                let x = Point::new(on_plane);
                for flip in [false, true] {
                    let w: Vec<Rat> = h
                        .normal()
                        .iter()
                        .map(|c| if flip { -c.clone() } else { c.clone() })
                        .collect();
                    push(push_off_hyperplane(&x, &w, &hyperplanes, a), &mut candidates)?;
                }
            }
        }
    }

    let mut best: Option<PiercingOptimum> = None;
    for c in &candidates {
        let count = pierce_count(&PierceTarget::Point(c.clone()), t)?;
        let better = match &best {
            None => true,
            Some(b) => count > b.count,
        };
        if better {
            best = Some(PiercingOptimum { point: c.clone(), count });
        }
    }
    if let Some(opt) = best {
        if opt.count > 0 {
            return Ok(opt);
        }
    }

    // Degenerate lists: no full-dimensional simplex, so every generic count
    // is zero. Measure boundary-inclusive counts at vertices and centers.
    let mut fallback: Option<PiercingOptimum> = None;
    for tau in t {
        for c in tau.vertices().iter().cloned().chain([barycenter(tau.vertices())]) {
            let count = pierce_count(&PierceTarget::Point(c.clone()), t)?;
            let better = match &fallback {
                None => true,
                Some(b) => count > b.count,
            };
            if better {
                fallback = Some(PiercingOptimum { point: c, count });
            }
        }
    }
    Ok(fallback.expect("simplex list is nonempty"))
}

/// A line { x : <n, x> = off } in the plane.
struct Line2 {
    n: [Rat; 2],
    off: Rat,
}

impl Line2 {
    fn eval(&self, x: &[Rat; 2]) -> Rat {
        &self.n[0] * &x[0] + &self.n[1] * &x[1] - &self.off
    }

    fn canonical_key(&self) -> Vec<Rat> {
        let mut key = vec![self.n[0].clone(), self.n[1].clone(), self.off.clone()];
        let lead = key.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rat::one);
        for c in &mut key {
            *c = &*c / &lead;
        }
        key
    }
}

/// One interior point of every bounded cell of the line arrangement (and of
/// some unbounded ones). Edge midpoints between consecutive crossings along
/// each line, displaced along both normals by half the distance to the
/// nearest other line.
fn cell_interior_points_2d(lines: &[Line2]) -> Vec<[Rat; 2]> {
    let mut reps: Vec<[Rat; 2]> = Vec::new();
    for (i, li) in lines.iter().enumerate() {
        let dir = [-li.n[1].clone(), li.n[0].clone()];
        let nn = &li.n[0] * &li.n[0] + &li.n[1] * &li.n[1];
        let base = [&li.off * &li.n[0] / &nn, &li.off * &li.n[1] / &nn];
        let mut ts: Vec<Rat> = Vec::new();
        for (j, lj) in lines.iter().enumerate() {
            if j == i {
                continue;
            }
            let denom = &lj.n[0] * &dir[0] + &lj.n[1] * &dir[1];
            if !denom.is_zero() {
                ts.push(-lj.eval(&base) / denom);
            }
        }
        ts.sort();
        ts.dedup();
        for w in ts.windows(2) {
            let mid = (&w[0] + &w[1]) / Rat::from_integer(2.into());
            let m = [&base[0] + &mid * &dir[0], &base[1] + &mid * &dir[1]];
            for flip in [false, true] {
                let nrm = if flip {
                    [-li.n[0].clone(), -li.n[1].clone()]
                } else {
                    [li.n[0].clone(), li.n[1].clone()]
                };
                let mut step: Option<Rat> = None;
                for (j, lj) in lines.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let denom = &lj.n[0] * &nrm[0] + &lj.n[1] * &nrm[1];
                    if denom.is_zero() {
                        continue;
                    }
                    let s = -lj.eval(&m) / denom;
                    if s.is_positive() && step.as_ref().map_or(true, |b| &s < b) {
                        step = Some(s);
                    }
                }
                let delta = step.map_or_else(Rat::one, |s| s / Rat::from_integer(2.into()));
                reps.push([&m[0] + &delta * &nrm[0], &m[1] + &delta * &nrm[1]]);
            }
        }
    }
    reps
}

/// A point on the plane plus two independent directions spanning it.
fn plane_frame(h: &Hyperplane) -> (Point, Vec<Rat>, Vec<Rat>) {
    let n = h.normal();
    let nn: Rat = n.iter().map(|c| c * c).sum();
    let p0 = Point::new(n.iter().map(|c| h.offset() * c / &nn).collect());
    let j0 = n.iter().position(|c| !c.is_zero()).expect("nonzero normal");
    let mut frame: Vec<Vec<Rat>> = Vec::new();
    for j in 0..3 {
        if j == j0 {
            continue;
        }
        let mut e = vec![Rat::from_integer(0.into()); 3];
        e[j] = Rat::one();
        e[j0] = -(&n[j] / &n[j0]);
        frame.push(e);
    }
    let e2 = frame.pop().expect("two spanning directions");
    let e1 = frame.pop().expect("two spanning directions");
    (p0, e1, e2)
}

/// `x` lies on hyperplane `skip` and on no other; step along `w` by half
/// the distance to the nearest other hyperplane.
fn push_off_hyperplane(x: &Point, w: &[Rat], hyperplanes: &[Hyperplane], skip: usize) -> Point {
    let mut step: Option<Rat> = None;
    for (j, h) in hyperplanes.iter().enumerate() {
        if j == skip {
            continue;
        }
        let denom = dot(h.normal(), w);
        if denom.is_zero() {
            continue;
        }
        let s = -h.eval(x) / denom;
        if s.is_positive() && step.as_ref().map_or(true, |b| &s < b) {
            step = Some(s);
        }
    }
    let delta = step.map_or_else(Rat::one, |s| s / Rat::from_integer(2.into()));
    Point::new(
        (0..x.dim())
            .map(|j| x.coord(j) + &delta * &w[j])
            .collect(),
    )
}

fn barycenter(verts: &[Point]) -> Point {
    let d = verts[0].dim();
    let n = Rat::from_integer(num::BigInt::from(verts.len()));
    Point::new(
        (0..d)
            .map(|j| verts.iter().map(|v| v.coord(j).clone()).sum::<Rat>() / &n)
            .collect(),
    )
}

fn canonical_hyperplane_key(h: &Hyperplane) -> Vec<Rat> {
    let mut key: Vec<Rat> = h.normal().to_vec();
    key.push(h.offset().clone());
    let lead = key.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rat::one);
    for c in &mut key {
        *c = &*c / &lead;
    }
    key
}

/// Exact fraction of (d+1)-subsets of `a` that are NOT vertically convex:
/// some member's projection lies strictly inside the projected hull of the
/// other members' projections.
pub fn vertical_delta_convexity(a: &[Point]) -> Result<Rat, OracleError> {
    if a.is_empty() {
        return Err(OracleError::BadInput("empty point set".into()));
    }
    let d = a[0].dim();
    if a.len() < d + 1 {
        return Err(OracleError::BadInput(format!(
            "need at least {} points in dimension {}, got {}",
            d + 1,
            d,
            a.len()
        )));
    }
    let projected: Vec<Point> = a.iter().map(|p| p.project()).collect();
    let total = binomial(a.len() as u64, (d + 1) as u64);
    let mut bad: u128 = 0;
    let mut err: Option<GeomError> = None;
    for_each_subset(a.len(), d + 1, |idx| {
        if err.is_some() {
            return;
        }
        for (slot, &i) in idx.iter().enumerate() {
            let others: Vec<Point> = idx
                .iter()
                .enumerate()
                .filter(|&(s, _)| s != slot)
                .map(|(_, &j)| projected[j].clone())
                .collect();
            match point_strictly_in_simplex(&projected[i], &others) {
                Ok(true) => {
                    bad += 1;
                    break;
                }
                Ok(false) => {}
                Err(e) => {
                    err = Some(e);
                    return;
                }
            }
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(Rat::new(bad.into(), total.into()))
}
