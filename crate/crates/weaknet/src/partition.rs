//! Simplicial partitions of finite point sets with measured hyperplane
//! crossing quality, vertical (projected) partitions, and the flattened
//! two-level refinement.
//!
//! Construction is recursive heaviest-first splitting: each class is cut by
//! an exact halving hyperplane chosen among candidate directions to minimize
//! weighted crossings against a seeded test family, and every final class is
//! bounded by a tight corner simplex inflated so its points are strictly
//! interior. Quality is never assumed: every build measures the maximum
//! crossing count over a deterministic family of spanned hyperplanes and
//! rebuilds with a fresh seed when the measurement exceeds the scheduled
//! envelope.

use crate::geom::{GeomError, Hyperplane, Point, Simplex};
use crate::scalar::{dot, rat, Rat, Sign};
use crate::schedule::Schedule;
use crate::util::{derive_seed, for_each_subset, parallel_map};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("budget exceeded for {what}: needs {got}, cap {limit}")]
    Budget { what: String, limit: u128, got: u128 },
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// One partition class: its point ids (sorted) and the simplex the points
/// lie strictly inside. Empty classes carry no simplex.
#[derive(Clone, Debug)]
pub struct PartEntry {
    pub points: Vec<u32>,
    pub simplex: Option<Simplex>,
}

/// A partition of a point set into exactly `r` classes, some possibly
/// empty, where every nonempty class holds between ⌈n/r⌉ and 2⌈n/r⌉ − 1
/// points, all strictly inside the class simplex.
#[derive(Clone, Debug)]
pub struct SimplicialPartition {
    d: usize,
    parts: Vec<PartEntry>,
    owner: Vec<u32>,
    max_crossing: usize,
    crossing_bound: f64,
    attempts: u32,
    family_size: usize,
}

impl SimplicialPartition {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn parts(&self) -> &[PartEntry] {
        &self.parts
    }

    /// Class index of every point, aligned with the input order.
    pub fn owner(&self) -> &[u32] {
        &self.owner
    }

    pub fn part_of(&self, point: usize) -> usize {
        self.owner[point] as usize
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    /// Largest crossing count observed over the measurement family.
    pub fn max_crossing(&self) -> usize {
        self.max_crossing
    }

    /// The envelope the accepted build was measured against.
    pub fn crossing_bound(&self) -> f64 {
        self.crossing_bound
    }

    pub fn attempts(&self) -> u32 {
        self.attempts
    }

    pub fn family_size(&self) -> usize {
        self.family_size
    }

    pub fn dump_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "r": self.parts.len(),
            "max_crossing": self.max_crossing,
            "crossing_bound": self.crossing_bound,
            "attempts": self.attempts,
            "family_size": self.family_size,
            "parts": self.parts.iter().map(|p| json!({
                "points": p.points,
                "simplex": p.simplex.as_ref().map(|s| s.vertices().iter()
                    .map(|v| v.coords().iter().map(Rat::to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The half-open size window [lo, hi) every nonempty class of an
/// r-partition of n points satisfies.
pub fn size_window(n: usize, r: usize) -> (usize, usize) {
    let k = n.div_ceil(r);
    (k, 2 * k)
}

/// Crossing report for one hyperplane against a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZoneCount {
    /// Classes whose simplex the hyperplane crosses.
    pub simplices: usize,
    /// Total points living in the crossed classes.
    pub zone_points: usize,
}

/// Counts the classes whose simplex `h` crosses, and the points they hold.
pub fn crossing_number(partition: &SimplicialPartition, h: &Hyperplane) -> ZoneCount {
    assert_eq!(
        h.dim(),
        partition.d,
        "hyperplane dimension does not match the partition"
    );
    let mut simplices = 0;
    let mut zone_points = 0;
    for part in &partition.parts {
        if let Some(s) = &part.simplex {
            if crosses(s, h) {
                simplices += 1;
                zone_points += part.points.len();
            }
        }
    }
    ZoneCount { simplices, zone_points }
}

/// Builds an r-class simplicial partition of `points`. The returned value
/// carries the measured maximum crossing over the deterministic test family
/// together with the envelope it was accepted under.
pub fn simplicial_partition(
    points: &[Point],
    r: usize,
    seed: u64,
    sched: &Schedule,
) -> Result<SimplicialPartition, PartitionError> {
    let n = points.len();
    if n == 0 {
        return Err(PartitionError::BadInput(
            "cannot partition an empty point set".into(),
        ));
    }
    let d = points[0].dim();
    if d == 0 {
        return Err(PartitionError::BadInput(
            "points need at least one coordinate".into(),
        ));
    }
    if points.iter().any(|p| p.dim() != d) {
        return Err(PartitionError::BadInput("point dimensions disagree".into()));
    }
    if r == 0 || r > n {
        return Err(PartitionError::BadInput(format!(
            "class count {r} outside 1..={n}"
        )));
    }

    let bound = sched.c_cross(d) * (r as f64).powf(1.0 - 1.0 / d as f64);
    // The measurement family is fixed across rebuilds so a retry cannot
    // pass by drawing an easier exam.
    let family_seed = derive_seed(seed, "partition-measure", 0);
    let mut worst = 0usize;
    for attempt in 0..sched.partition_attempts {
        let built = build_attempt(
            points,
            r,
            d,
            derive_seed(seed, "partition-build", attempt as u64),
        )?;
        let (max_crossing, family_size) = measure_crossing(points, &built, d, r, family_seed);
        if (max_crossing as f64) <= bound + 1e-9 {
            return Ok(finish(
                points,
                built,
                r,
                d,
                max_crossing,
                bound,
                attempt + 1,
                family_size,
            ));
        }
        worst = worst.max(max_crossing);
    }
    Err(PartitionError::Budget {
        what: format!("partition rebuilds (measured crossing {worst} over bound {bound:.2})"),
        limit: sched.partition_attempts as u128,
        got: sched.partition_attempts as u128,
    })
}

/// A partition of d-dimensional points driven entirely by their projections
/// to the first d − 1 coordinates: each class is the full preimage of a
/// class of the projected partition, so it lies in the vertical prism over
/// that class's simplex.
#[derive(Clone, Debug)]
pub struct VerticalPartition {
    d: usize,
    projected: SimplicialPartition,
}

impl VerticalPartition {
    /// Ambient dimension of the original points.
    pub fn d(&self) -> usize {
        self.d
    }

    /// The partition of the projected set; class point ids apply to the
    /// original points unchanged.
    pub fn projected(&self) -> &SimplicialPartition {
        &self.projected
    }

    pub fn parts(&self) -> &[PartEntry] {
        self.projected.parts()
    }

    pub fn owner(&self) -> &[u32] {
        self.projected.owner()
    }

    pub fn r(&self) -> usize {
        self.projected.r()
    }
}

pub fn vertical_partition(
    points: &[Point],
    r: usize,
    seed: u64,
    sched: &Schedule,
) -> Result<VerticalPartition, PartitionError> {
    let Some(first) = points.first() else {
        return Err(PartitionError::BadInput(
            "cannot partition an empty point set".into(),
        ));
    };
    let d = first.dim();
    if d < 2 {
        return Err(PartitionError::BadInput(
            "vertical partitions need dimension at least 2".into(),
        ));
    }
    if points.iter().any(|p| p.dim() != d) {
        return Err(PartitionError::BadInput("point dimensions disagree".into()));
    }
    let shadows: Vec<Point> = points.iter().map(Point::project).collect();
    let projected = simplicial_partition(&shadows, r, seed, sched)?;
    Ok(VerticalPartition { d, projected })
}

/// One flattened class of the two-level partition.
#[derive(Clone, Debug)]
pub struct FlatPart {
    pub outer: u32,
    pub inner: u32,
    /// Global point ids.
    pub points: Vec<u32>,
    pub simplex: Option<Simplex>,
}

/// An outer vertical s-partition refined by a full-dimensional t-partition
/// inside every outer class, flattened to s·t addressable classes.
#[derive(Clone, Debug)]
pub struct TwoLevelPartition {
    pub outer: VerticalPartition,
    /// Inner partitions per outer class. Point ids inside them are local to
    /// the outer class's point list; `None` for empty outer classes.
    pub inner: Vec<Option<SimplicialPartition>>,
    pub flat: Vec<FlatPart>,
}

pub fn two_level_partition(
    points: &[Point],
    s: usize,
    t: usize,
    seed: u64,
    sched: &Schedule,
) -> Result<TwoLevelPartition, PartitionError> {
    let n = points.len();
    if s == 0 || t == 0 {
        return Err(PartitionError::BadInput(
            "class counts must be at least 1".into(),
        ));
    }
    if s.checked_mul(t).map_or(true, |st| st > n) {
        return Err(PartitionError::BadInput(format!(
            "s·t = {s}·{t} exceeds the point count {n}"
        )));
    }
    let outer = vertical_partition(points, s, derive_seed(seed, "two-level-outer", 0), sched)?;

    // Inner builds share no state, so distinct outer classes may run on
    // worker threads; seeds derive from the class index alone.
    let subsets: Vec<Option<(Vec<u32>, Vec<Point>)>> = outer
        .parts()
        .iter()
        .map(|p| {
            if p.points.is_empty() {
                None
            } else {
                let locals = p.points.iter().map(|&id| points[id as usize].clone()).collect();
                Some((p.points.clone(), locals))
            }
        })
        .collect();
    let built: Vec<Option<Result<SimplicialPartition, PartitionError>>> =
        parallel_map(subsets.len(), sched.jobs, |i| {
            subsets[i].as_ref().map(|(_, local_points)| {
                simplicial_partition(
                    local_points,
                    t,
                    derive_seed(seed, "two-level-inner", i as u64),
                    sched,
                )
            })
        });
    let mut inner: Vec<Option<SimplicialPartition>> = Vec::with_capacity(subsets.len());
    for item in built {
        match item {
            None => inner.push(None),
            Some(Ok(p)) => inner.push(Some(p)),
            Some(Err(e)) => return Err(e),
        }
    }

    let mut flat = Vec::with_capacity(s * t);
    for i in 0..s {
        for j in 0..t {
            let (pts, simplex) = match (&inner[i], &subsets[i]) {
                (Some(ip), Some((global, _))) => {
                    let entry = &ip.parts()[j];
                    let mut pts: Vec<u32> =
                        entry.points.iter().map(|&lid| global[lid as usize]).collect();
                    pts.sort_unstable();
                    (pts, entry.simplex.clone())
                }
                _ => (Vec::new(), None),
            };
            flat.push(FlatPart { outer: i as u32, inner: j as u32, points: pts, simplex });
        }
    }
    Ok(TwoLevelPartition { outer, inner, flat })
}

/// True when the hyperplane meets both strict sides of the simplex, i.e.
/// crosses its relative interior transversally.
fn crosses(simplex: &Simplex, h: &Hyperplane) -> bool {
    let mut pos = false;
    let mut neg = false;
    for v in simplex.vertices() {
        match h.side(v) {
            Sign::Pos => pos = true,
            Sign::Neg => neg = true,
            Sign::Zero => {}
        }
        if pos && neg {
            return true;
        }
    }
    false
}

struct Active {
    ids: Vec<u32>,
    simplex: Simplex,
}

/// Sample-size caps keeping the spanned candidate families tractable.
fn greedy_cap(d: usize) -> usize {
    match d {
        0 | 1 => 0,
        2 => 96,
        3 => 40,
        _ => 20,
    }
}

fn measure_cap(d: usize) -> usize {
    match d {
        0 | 1 => 4096,
        2 => 256,
        3 => 64,
        _ => 24,
    }
}

fn weight(stabbed: i64) -> f64 {
    2f64.powi(stabbed.clamp(0, 40) as i32)
}

fn sample_indices(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    if k >= n {
        return (0..n).collect();
    }
    let mut v: Vec<usize> = rand::seq::index::sample(rng, n, k).into_iter().collect();
    v.sort_unstable();
    v
}

fn candidate_directions(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<Rat>> {
    let mut dirs: Vec<Vec<Rat>> = (0..d)
        .map(|j| (0..d).map(|i| if i == j { rat(1) } else { rat(0) }).collect())
        .collect();
    for _ in 0..6 {
        loop {
            let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-8i64..=8)).collect();
            if v.iter().any(|&c| c != 0) {
                dirs.push(v.into_iter().map(rat).collect());
                break;
            }
        }
    }
    dirs
}

/// Largest coordinate spread of the set, floored at 1 so inflation amounts
/// stay positive for degenerate clouds.
fn coordinate_spread(points: &[Point]) -> Rat {
    let d = points[0].dim();
    let mut best = Rat::one();
    for j in 0..d {
        let lo = points.iter().map(|p| p.coord(j)).min().unwrap();
        let hi = points.iter().map(|p| p.coord(j)).max().unwrap();
        let w = hi - lo;
        if w > best {
            best = w;
        }
    }
    best
}

/// Strictly positive, pairwise distinct inflation amounts; the shared
/// counter makes every bounding facet across all classes of a build sit on
/// its own hyperplane.
fn inflation(counter: &mut u64, unit: &Rat) -> Rat {
    let denom = 1024 * (7 + *counter as i64);
    *counter += 1;
    unit / &rat(denom)
}

/// Tight simplex with facet normals along the signed axes plus the signed
/// diagonal, inflated so every class point is strictly interior.
fn corner_simplex(
    ids: &[u32],
    points: &[Point],
    signs: &[Rat],
    counter: &mut u64,
    unit: &Rat,
) -> Simplex {
    let d = signs.len();
    let mut lo: Vec<Rat> = (0..d)
        .map(|j| {
            ids.iter()
                .map(|&id| &signs[j] * points[id as usize].coord(j))
                .min()
                .unwrap()
        })
        .collect();
    let mut hi: Rat = ids
        .iter()
        .map(|&id| {
            let p = &points[id as usize];
            (0..d)
                .map(|j| &signs[j] * p.coord(j))
                .fold(Rat::zero(), |a, b| a + b)
        })
        .max()
        .unwrap();
    for item in lo.iter_mut() {
        *item -= inflation(counter, unit);
    }
    hi += inflation(counter, unit);
    let edge = &hi - &lo.iter().fold(Rat::zero(), |a, b| a + b);
    debug_assert!(edge > Rat::zero());
    let apex: Vec<Rat> = (0..d).map(|j| &signs[j] * &lo[j]).collect();
    let mut vertices = vec![Point::new(apex.clone())];
    for j in 0..d {
        let mut v = apex.clone();
        v[j] = &v[j] + &(&signs[j] * &edge);
        vertices.push(Point::new(v));
    }
    Simplex::new_unchecked(vertices)
}

/// One-dimensional classes are contiguous runs of the sorted coordinate
/// order, bounded by intervals inflated a quarter of the gap toward each
/// neighbor so the intervals stay pairwise disjoint.
fn build_line(points: &[Point], k_sz: usize, unit: &Rat) -> Vec<Active> {
    let n = points.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        points[a as usize]
            .coord(0)
            .cmp(points[b as usize].coord(0))
            .then(a.cmp(&b))
    });
    let mut runs: Vec<(usize, usize)> = vec![(0, n)];
    let mut i = 0;
    while i < runs.len() {
        let (start, len) = runs[i];
        if len >= 2 * k_sz {
            let q = len / k_sz;
            let a = k_sz * q.div_ceil(2);
            runs[i] = (start, a);
            runs.push((start + a, len - a));
        } else {
            i += 1;
        }
    }
    runs.sort_unstable();
    let quarter = rat(4);
    runs.iter()
        .map(|&(start, len)| {
            let slice = &order[start..start + len];
            let min_c = points[slice[0] as usize].coord(0);
            let max_c = points[slice[len - 1] as usize].coord(0);
            let gap_lo = if start == 0 {
                unit.clone()
            } else {
                min_c - points[order[start - 1] as usize].coord(0)
            };
            let gap_hi = if start + len == n {
                unit.clone()
            } else {
                points[order[start + len] as usize].coord(0) - max_c
            };
            let lo = min_c - &(gap_lo / &quarter);
            let hi = max_c + &(gap_hi / &quarter);
            let mut ids = slice.to_vec();
            ids.sort_unstable();
            Active {
                ids,
                simplex: Simplex::new_unchecked(vec![
                    Point::new(vec![lo]),
                    Point::new(vec![hi]),
                ]),
            }
        })
        .collect()
}

fn build_attempt(
    points: &[Point],
    r: usize,
    d: usize,
    seed: u64,
) -> Result<Vec<Active>, PartitionError> {
    let n = points.len();
    let k_sz = n.div_ceil(r);
    let unit = coordinate_spread(points);
    let mut counter = 0u64;

    if d == 1 {
        return Ok(build_line(points, k_sz, &unit));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Orientation of every bounding corner simplex this attempt.
    let signs: Vec<Rat> = (0..d)
        .map(|_| if rng.gen::<bool>() { rat(1) } else { rat(-1) })
        .collect();

    if k_sz == 1 {
        // r == n: one singleton class per point, each boxed in a tiny simplex.
        return Ok((0..n)
            .map(|i| {
                let ids = vec![i as u32];
                let simplex = corner_simplex(&ids, points, &signs, &mut counter, &unit);
                Active { ids, simplex }
            })
            .collect());
    }

    // Seeded family of spanned hyperplanes steering the split choice.
    let gs = n.min(r + d + 1).min(greedy_cap(d));
    let gs_ids = sample_indices(&mut rng, n, gs);
    let mut tests: Vec<Hyperplane> = Vec::new();
    for_each_subset(gs, d, |sub| {
        let span: Vec<&Point> = sub.iter().map(|&i| &points[gs_ids[i]]).collect();
        if let Ok(h) = Hyperplane::through_points(&span, None) {
            tests.push(h);
        }
    });
    // Doubling-weight exponent: how many current class simplices each test
    // hyperplane crosses.
    let mut stabbed: Vec<i64> = vec![0; tests.len()];
    let dirs = candidate_directions(&mut rng, d);

    let root_ids: Vec<u32> = (0..n as u32).collect();
    let root = corner_simplex(&root_ids, points, &signs, &mut counter, &unit);
    for (i, h) in tests.iter().enumerate() {
        if crosses(&root, h) {
            stabbed[i] = 1;
        }
    }
    let mut parts: Vec<Active> = vec![Active { ids: root_ids, simplex: root }];

    loop {
        // Heaviest splittable class, earliest on ties.
        let mut pick: Option<usize> = None;
        for (i, p) in parts.iter().enumerate() {
            if p.ids.len() >= 2 * k_sz
                && pick.map_or(true, |b: usize| p.ids.len() > parts[b].ids.len())
            {
                pick = Some(i);
            }
        }
        let Some(pi) = pick else { break };
        let c = parts[pi].ids.len();
        // Cut at a multiple of the window floor: both children can then be
        // driven into [k, 2k) and the nonempty class count comes out maximal.
        let q = c / k_sz;
        let cut_rank = k_sz * q.div_ceil(2);

        let mut best: Option<(f64, Active, Active)> = None;
        for u in &dirs {
            let mut keys: Vec<(Rat, u32)> = parts[pi]
                .ids
                .iter()
                .map(|&id| (dot(u, points[id as usize].coords()), id))
                .collect();
            keys.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
            if keys[cut_rank - 1].0 == keys[cut_rank].0 {
                // Tied keys cannot be halved exactly in this direction.
                continue;
            }
            let mut low_ids: Vec<u32> = keys[..cut_rank].iter().map(|kv| kv.1).collect();
            let mut high_ids: Vec<u32> = keys[cut_rank..].iter().map(|kv| kv.1).collect();
            low_ids.sort_unstable();
            high_ids.sort_unstable();
            // Trials run on a scratch counter; only the committed winner
            // advances the real one, by exactly the same values.
            let mut scratch = counter;
            let sim_low = corner_simplex(&low_ids, points, &signs, &mut scratch, &unit);
            let sim_high = corner_simplex(&high_ids, points, &signs, &mut scratch, &unit);
            let score: f64 = tests
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    let hits = crosses(&sim_low, h) as u32 + crosses(&sim_high, h) as u32;
                    hits as f64 * weight(stabbed[i])
                })
                .sum();
            if best.as_ref().map_or(true, |(s, ..)| score < *s) {
                best = Some((
                    score,
                    Active { ids: low_ids, simplex: sim_low },
                    Active { ids: high_ids, simplex: sim_high },
                ));
            }
        }
        let Some((_, low, high)) = best else {
            return Err(PartitionError::BadInput(
                "a class admits no exact halving direction; coordinate values repeat".into(),
            ));
        };
        for (i, h) in tests.iter().enumerate() {
            let delta = crosses(&low.simplex, h) as i64 + crosses(&high.simplex, h) as i64
                - crosses(&parts[pi].simplex, h) as i64;
            stabbed[i] = (stabbed[i] + delta).max(0);
        }
        counter += 2 * (d as u64 + 1);
        parts[pi] = low;
        parts.push(high);
    }
    Ok(parts)
}

/// Maximum crossing count over a deterministic family of hyperplanes
/// spanned by a seeded sample, plus the family's size.
fn measure_crossing(
    points: &[Point],
    parts: &[Active],
    d: usize,
    r: usize,
    seed: u64,
) -> (usize, usize) {
    let n = points.len();
    let ms = n.min(2 * r + d + 1).min(measure_cap(d));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = sample_indices(&mut rng, n, ms);
    let mut max = 0usize;
    let mut family = 0usize;
    for_each_subset(ms, d, |sub| {
        let span: Vec<&Point> = sub.iter().map(|&i| &points[ids[i]]).collect();
        if let Ok(h) = Hyperplane::through_points(&span, None) {
            family += 1;
            let c = parts.iter().filter(|p| crosses(&p.simplex, &h)).count();
            if c > max {
                max = c;
            }
        }
    });
    (max, family)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    points: &[Point],
    mut built: Vec<Active>,
    r: usize,
    d: usize,
    max_crossing: usize,
    crossing_bound: f64,
    attempts: u32,
    family_size: usize,
) -> SimplicialPartition {
    debug_assert!(built.len() <= r);
    built.sort_by_key(|p| p.ids[0]);
    let mut parts: Vec<PartEntry> = built
        .into_iter()
        .map(|a| PartEntry { points: a.ids, simplex: Some(a.simplex) })
        .collect();
    while parts.len() < r {
        parts.push(PartEntry { points: Vec::new(), simplex: None });
    }
    let mut owner = vec![0u32; points.len()];
    for (i, part) in parts.iter().enumerate() {
        for &pid in &part.points {
            owner[pid as usize] = i as u32;
        }
    }
    SimplicialPartition {
        d,
        parts,
        owner,
        max_crossing,
        crossing_bound,
        attempts,
        family_size,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{point_in_hull, HullPosition};
    use crate::oracle::{generate_points, GenKind, GeneratorSpec};

    fn pt(x: i64, y: i64) -> Point {
        Point::from_i64(&[x, y])
    }

    fn seven_points() -> Vec<Point> {
        [(0, 0), (1, 5), (2, 3), (3, 8), (4, 1), (5, 7), (6, 4)]
            .iter()
            .map(|&(x, y)| pt(x, y))
            .collect()
    }

    fn gen_points(d: usize, n: usize, seed: u64) -> Vec<Point> {
        generate_points(&GeneratorSpec { kind: GenKind::UniformCube, d, n, seed })
            .expect("generator succeeds")
    }

    fn assert_window(partition: &SimplicialPartition, n: usize) {
        let (lo, hi) = size_window(n, partition.r());
        let mut total = 0usize;
        for (i, part) in partition.parts().iter().enumerate() {
            total += part.points.len();
            if part.points.is_empty() {
                assert!(part.simplex.is_none(), "empty class {i} carries a simplex");
                continue;
            }
            assert!(
                part.points.len() >= lo && part.points.len() < hi,
                "class {i} holds {} points outside [{lo}, {hi})",
                part.points.len()
            );
            for &pid in &part.points {
                assert_eq!(partition.part_of(pid as usize), i, "owner disagrees");
            }
        }
        assert_eq!(total, n, "classes do not partition the set");
    }

    #[test]
    fn single_class_holds_every_point() {
        let points = seven_points();
        let sched = Schedule::default();
        let p = simplicial_partition(&points, 1, 11, &sched).unwrap();
        assert_eq!(p.r(), 1);
        assert_window(&p, 7);
        let simplex = p.parts()[0].simplex.as_ref().unwrap();
        for q in &points {
            assert_eq!(point_in_hull(q, simplex.vertices()).unwrap(), HullPosition::Interior);
        }
        assert!((p.max_crossing() as f64) <= p.crossing_bound() + 1e-9);

        // A hyperplane through the middle crosses the single simplex; one
        // far away misses everything.
        let through = Hyperplane::new(vec![rat(0), rat(1)], rat(4), None);
        assert_eq!(crossing_number(&p, &through), ZoneCount { simplices: 1, zone_points: 7 });
        let misses = Hyperplane::new(vec![rat(1), rat(0)], rat(1000), None);
        assert_eq!(crossing_number(&p, &misses), ZoneCount { simplices: 0, zone_points: 0 });
    }

    #[test]
    fn full_resolution_gives_singleton_classes() {
        let points = seven_points();
        let sched = Schedule::default();
        let p = simplicial_partition(&points, 7, 5, &sched).unwrap();
        assert_eq!(p.r(), 7);
        assert_window(&p, 7);
        for (i, part) in p.parts().iter().enumerate() {
            assert_eq!(part.points.len(), 1);
            let simplex = part.simplex.as_ref().unwrap();
            let q = &points[part.points[0] as usize];
            assert_eq!(
                point_in_hull(q, simplex.vertices()).unwrap(),
                HullPosition::Interior,
                "class {i}"
            );
        }
    }

    #[test]
    fn power_of_two_sizes_come_out_exact() {
        let points = gen_points(2, 1024, 404);
        let sched = Schedule::default();
        let p = simplicial_partition(&points, 16, 9, &sched).unwrap();
        assert_window(&p, 1024);
        for part in p.parts() {
            assert_eq!(part.points.len(), 64);
        }
        assert!((p.max_crossing() as f64) <= p.crossing_bound() + 1e-9);
        assert!(p.family_size() > 0);
    }

    #[test]
    fn separated_clusters_split_cleanly() {
        let points: Vec<Point> = [(0, 0), (1, 3), (2, 1), (100, 2), (101, 6), (102, 4)]
            .iter()
            .map(|&(x, y)| pt(x, y))
            .collect();
        let sched = Schedule::default();
        let p = simplicial_partition(&points, 2, 3, &sched).unwrap();
        assert_window(&p, 6);
        assert_eq!(p.parts()[0].points, vec![0, 1, 2]);
        assert_eq!(p.parts()[1].points, vec![3, 4, 5]);

        // y = 5/2 runs through both clusters; x = 50 threads the gap.
        let horizontal = Hyperplane::new(vec![rat(0), rat(2)], rat(5), None);
        assert_eq!(
            crossing_number(&p, &horizontal),
            ZoneCount { simplices: 2, zone_points: 6 }
        );
        let vertical = Hyperplane::new(vec![rat(1), rat(0)], rat(50), None);
        assert_eq!(
            crossing_number(&p, &vertical),
            ZoneCount { simplices: 0, zone_points: 0 }
        );
    }

    #[test]
    fn one_dimensional_classes_are_disjoint_intervals() {
        let points = gen_points(2, 30, 71);
        let sched = Schedule::default();
        let v = vertical_partition(&points, 5, 23, &sched).unwrap();
        assert_eq!(v.d(), 2);
        let proj = v.projected();
        assert_eq!(proj.d(), 1);
        assert_window(proj, 30);

        // Classes are contiguous runs of the x-order.
        let mut order: Vec<usize> = (0..30).collect();
        order.sort_by(|&a, &b| points[a].coord(0).cmp(points[b].coord(0)));
        let rank: std::collections::BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(r, &id)| (id, r)).collect();
        for part in proj.parts() {
            if part.points.is_empty() {
                continue;
            }
            let ranks: Vec<usize> = part.points.iter().map(|&id| rank[&(id as usize)]).collect();
            let (min_r, max_r) = (
                *ranks.iter().min().unwrap(),
                *ranks.iter().max().unwrap(),
            );
            assert_eq!(max_r - min_r + 1, ranks.len(), "class is not contiguous in x");
        }

        // Every point query lands strictly inside exactly one interval.
        for p in &points {
            let query = Hyperplane::new(vec![rat(1)], p.coord(0).clone(), None);
            let count = crossing_number(proj, &query);
            assert_eq!(count.simplices, 1, "point query must stab exactly one interval");
        }
    }

    #[test]
    fn two_level_composes_both_windows() {
        let points = gen_points(3, 256, 88);
        let sched = Schedule::default();
        let q = two_level_partition(&points, 4, 4, 31, &sched).unwrap();
        assert_eq!(q.flat.len(), 16);
        let mut seen: Vec<u32> = Vec::new();
        for fp in &q.flat {
            assert_eq!(fp.points.len(), 16);
            assert!(fp.points.len() >= 16 && fp.points.len() < 64);
            seen.extend(&fp.points);
        }
        seen.sort_unstable();
        assert_eq!(seen, (0..256).collect::<Vec<u32>>());

        // Projections of every class member sit strictly inside the outer
        // class simplex.
        for (i, part) in q.outer.parts().iter().enumerate() {
            let simplex = part.simplex.as_ref().unwrap();
            for &pid in &part.points {
                let shadow = points[pid as usize].project();
                assert_eq!(
                    point_in_hull(&shadow, simplex.vertices()).unwrap(),
                    HullPosition::Interior,
                    "outer class {i}"
                );
            }
        }
    }

    #[test]
    fn trivial_two_level_shapes() {
        let points = gen_points(2, 24, 55);
        let sched = Schedule::default();

        let single_outer = two_level_partition(&points, 1, 4, 7, &sched).unwrap();
        assert_eq!(single_outer.outer.r(), 1);
        assert_eq!(single_outer.flat.len(), 4);
        let sizes: Vec<usize> = single_outer.flat.iter().map(|f| f.points.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 24);
        assert!(sizes.iter().all(|&s| s == 6));

        let single_inner = two_level_partition(&points, 4, 1, 7, &sched).unwrap();
        assert_eq!(single_inner.flat.len(), 4);
        for (fp, outer_part) in single_inner.flat.iter().zip(single_inner.outer.parts()) {
            assert_eq!(fp.points, outer_part.points);
            let simplex = fp.simplex.as_ref().unwrap();
            assert_eq!(simplex.dim(), 2);
            assert_eq!(simplex.k(), 2, "inner simplex must be full-dimensional");
        }
    }

    #[test]
    fn same_seed_reproduces_the_build() {
        let points = gen_points(2, 100, 19);
        let sched = Schedule::default();
        let a = simplicial_partition(&points, 8, 333, &sched).unwrap();
        let b = simplicial_partition(&points, 8, 333, &sched).unwrap();
        assert_eq!(a.owner(), b.owner());
        assert_eq!(a.max_crossing(), b.max_crossing());
        assert_eq!(a.attempts(), b.attempts());
        for (pa, pb) in a.parts().iter().zip(b.parts()) {
            assert_eq!(pa.points, pb.points);
            assert_eq!(pa.simplex, pb.simplex);
        }
    }

    #[test]
    fn bad_shapes_are_rejected() {
        let sched = Schedule::default();
        let points = seven_points();
        assert!(matches!(
            simplicial_partition(&[], 1, 0, &sched),
            Err(PartitionError::BadInput(_))
        ));
        assert!(matches!(
            simplicial_partition(&points, 0, 0, &sched),
            Err(PartitionError::BadInput(_))
        ));
        assert!(matches!(
            simplicial_partition(&points, 8, 0, &sched),
            Err(PartitionError::BadInput(_))
        ));
        let mixed = vec![pt(0, 0), Point::from_i64(&[1, 2, 3])];
        assert!(matches!(
            simplicial_partition(&mixed, 1, 0, &sched),
            Err(PartitionError::BadInput(_))
        ));
        let line = vec![Point::from_i64(&[0]), Point::from_i64(&[1])];
        assert!(matches!(
            vertical_partition(&line, 1, 0, &sched),
            Err(PartitionError::BadInput(_))
        ));
        assert!(matches!(
            two_level_partition(&points, 3, 3, 0, &sched),
            Err(PartitionError::BadInput(_))
        ));
        assert!(matches!(
            two_level_partition(&points, 0, 1, 0, &sched),
            Err(PartitionError::BadInput(_))
        ));
    }

    #[test]
    fn json_dump_lists_every_class() {
        let points = seven_points();
        let sched = Schedule::default();
        let p = simplicial_partition(&points, 3, 2, &sched).unwrap();
        let v = p.dump_json();
        assert_eq!(v["r"], 3);
        assert_eq!(v["d"], 2);
        let parts = v["parts"].as_array().unwrap();
        assert_eq!(parts.len(), 3);
        let listed: usize = parts
            .iter()
            .map(|p| p["points"].as_array().unwrap().len())
            .sum();
        assert_eq!(listed, 7);
        assert!(v["max_crossing"].is_number());
        assert!(v["attempts"].is_number());
    }
}
