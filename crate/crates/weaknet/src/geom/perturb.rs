//! General-position verification and deterministic perturbation.
//!
//! The general-position contract, at every projection level k = d, d-1, .., 2
//! (projection onto the first k coordinates):
//!   - no k+1 points lie on a common hyperplane of R^k;
//!   - no k points span a hyperplane parallel to a coordinate axis of R^k
//!     (some normal coordinate zero);
//! and additionally every coordinate axis carries pairwise distinct values.
//! The level-2 axis condition makes vertical projections pairwise distinct,
//! and applying the contract to a projected set again is exactly the contract
//! one level down, so projected outputs stay in general position.
//!
//! Verification is exhaustive while the tuple counts stay within a fixed
//! budget and switches to seeded sampling above it (the per-axis distinctness
//! scan stays exact at every size). Downstream predicates re-detect any missed
//! degeneracy when they hit it.

use super::{display_tuple, GeomError, Point};
use crate::scalar::{det_f64, det_rat, Rat, Sign};
use crate::util::{binomial, derive_seed, for_each_subset};
use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exhaustive verification is used while every tuple family at a level has at
/// most this many members.
const EXHAUSTIVE_CAP: u128 = 2_000_000;
/// Tuples sampled per family above the exhaustive budget.
const SAMPLED_TUPLES: usize = 20_000;
/// Resolution of the dyadic offsets: numerators are drawn from
/// (-2^20, 2^20) and scaled by magnitude / 2^20.
const OFFSET_BITS: u32 = 20;

/// `None` when the set passes every general-position predicate, else a
/// human-readable description of one offending tuple.
pub fn general_position_report(points: &[Point]) -> Option<String> {
    if points.len() < 2 {
        return None;
    }
    let d = points[0].dim();
    for p in points {
        if p.dim() != d {
            return Some(format!("mixed dimensions: expected {}, found {}", d, p.dim()));
        }
    }
    // Per-axis distinctness, exact at every size.
    for axis in 0..d {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].coord(axis).cmp(points[b].coord(axis)));
        for w in order.windows(2) {
            if points[w[0]].coord(axis) == points[w[1]].coord(axis) {
                return Some(format!(
                    "points {} and {} share coordinate {}: {}",
                    w[0],
                    w[1],
                    axis,
                    points[w[0]]
                ));
            }
        }
    }
    let mut level: Vec<Point> = points.to_vec();
    for k in (2..=d).rev() {
        if k < d {
            level = level.iter().map(|p| p.project()).collect();
        }
        if let Some(detail) = check_level(&level, k) {
            return Some(detail);
        }
    }
    None
}

/// True when `general_position_report` finds nothing.
pub fn is_general_position(points: &[Point]) -> bool {
    general_position_report(points).is_none()
}

fn check_level(pts: &[Point], k: usize) -> Option<String> {
    let n = pts.len();
    if n >= k + 1 {
        let count = binomial(n as u64, (k + 1) as u64);
        let mut bad: Option<Vec<usize>> = None;
        if count <= EXHAUSTIVE_CAP {
            for_each_subset(n, k + 1, |idx| {
                if bad.is_none() && affinely_dependent(pts, idx) {
                    bad = Some(idx.to_vec());
                }
            });
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(0, "gp-orient", k as u64));
            for _ in 0..SAMPLED_TUPLES {
                let idx = rand::seq::index::sample(&mut rng, n, k + 1).into_vec();
                if affinely_dependent(pts, &idx) {
                    bad = Some(idx);
                    break;
                }
            }
        }
        if let Some(idx) = bad {
            let refs: Vec<&Point> = idx.iter().map(|&i| &pts[i]).collect();
            return Some(format!(
                "level {}: points {:?} lie on a common hyperplane: {}",
                k,
                idx,
                display_tuple(&refs)
            ));
        }
    }
    if n >= k {
        let count = binomial(n as u64, k as u64);
        let mut bad: Option<(Vec<usize>, usize)> = None;
        if count <= EXHAUSTIVE_CAP {
            for_each_subset(n, k, |idx| {
                if bad.is_none() {
                    if let Some(axis) = axis_parallel_span(pts, idx) {
                        bad = Some((idx.to_vec(), axis));
                    }
                }
            });
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(0, "gp-axis", k as u64));
            for _ in 0..SAMPLED_TUPLES {
                let idx = rand::seq::index::sample(&mut rng, n, k).into_vec();
                if let Some(axis) = axis_parallel_span(pts, &idx) {
                    bad = Some((idx, axis));
                    break;
                }
            }
        }
        if let Some((idx, axis)) = bad {
            let refs: Vec<&Point> = idx.iter().map(|&i| &pts[i]).collect();
            return Some(format!(
                "level {}: points {:?} span a hyperplane parallel to axis {}: {}",
                k,
                idx,
                axis,
                display_tuple(&refs)
            ));
        }
    }
    None
}

fn affinely_dependent(pts: &[Point], idx: &[usize]) -> bool {
    let k = idx.len() - 1;
    let base = &pts[idx[0]];
    let mf: Vec<Vec<f64>> = idx[1..]
        .iter()
        .map(|&i| (0..k).map(|j| pts[i].approx()[j] - base.approx()[j]).collect())
        .collect();
    let (value, err) = det_f64(&mf);
    if Sign::of_f64_filtered(value, err).is_some() {
        return false;
    }
    let m: Vec<Vec<Rat>> = idx[1..]
        .iter()
        .map(|&i| (0..k).map(|j| pts[i].coord(j) - base.coord(j)).collect())
        .collect();
    det_rat(&m).is_zero()
}

/// Axis index of a zero normal coordinate of the hyperplane spanned by the
/// k-tuple, if any. A degenerate (dependent) tuple reports axis 0; the
/// level's dependence check flags it separately.
fn axis_parallel_span(pts: &[Point], idx: &[usize]) -> Option<usize> {
    let k = idx.len();
    let base = &pts[idx[0]];
    for axis in 0..k {
        // Normal coordinate `axis` is the minor with that column deleted.
        let mf: Vec<Vec<f64>> = idx[1..]
            .iter()
            .map(|&i| {
                (0..k)
                    .filter(|&j| j != axis)
                    .map(|j| pts[i].approx()[j] - base.approx()[j])
                    .collect()
            })
            .collect();
        let (value, err) = det_f64(&mf);
        if Sign::of_f64_filtered(value, err).is_some() {
            continue;
        }
        let m: Vec<Vec<Rat>> = idx[1..]
            .iter()
            .map(|&i| {
                (0..k)
                    .filter(|&j| j != axis)
                    .map(|j| pts[i].coord(j) - base.coord(j))
                    .collect()
            })
            .collect();
        if det_rat(&m).is_zero() {
            return Some(axis);
        }
    }
    None
}

/// Largest power of two that is <= r; requires r > 0.
fn pow2_floor(r: &Rat) -> Rat {
    debug_assert!(r.is_positive());
    let f = crate::scalar::to_f64(r);
    let mut e = if f.is_finite() && f > 0.0 { f.log2().floor() as i64 } else { 0 };
    let mut candidate = pow2(e);
    // The float estimate can be off by one step near powers of two.
    while &candidate > r {
        e -= 1;
        candidate = pow2(e);
    }
    while pow2(e + 1) <= *r {
        e += 1;
        candidate = pow2(e);
    }
    candidate
}

fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << e as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Moves every point by a deterministic dyadic offset, strictly less than the
/// magnitude in every coordinate, until the set passes the general-position
/// predicates. An input that already passes is returned unchanged. The default
/// magnitude is 2^-40 times the largest coordinate spread (or 2^-40 for a
/// degenerate cloud); an explicit magnitude is rounded down to a power of two
/// before scaling so offsets stay dyadic.
pub fn perturb_general_position(
    points: &[Point],
    magnitude: Option<&Rat>,
    seed: u64,
    max_retries: u32,
) -> Result<Vec<Point>, GeomError> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let d = points[0].dim();
    for p in points {
        if p.dim() != d {
            return Err(GeomError::DimensionMismatch { expected: d, got: p.dim() });
        }
    }
    if general_position_report(points).is_none() {
        return Ok(points.to_vec());
    }
    let base_magnitude = match magnitude {
        Some(m) => {
            if !m.is_positive() {
                return Err(GeomError::PerturbationFailed {
                    retries: 0,
                    detail: "magnitude must be positive".to_string(),
                });
            }
            m.clone()
        }
        None => {
            let mut diam = Rat::zero();
            for axis in 0..d {
                let mut lo = points[0].coord(axis).clone();
                let mut hi = lo.clone();
                for p in points {
                    if p.coord(axis) < &lo {
                        lo = p.coord(axis).clone();
                    }
                    if p.coord(axis) > &hi {
                        hi = p.coord(axis).clone();
                    }
                }
                let spread = hi - lo;
                if spread > diam {
                    diam = spread;
                }
            }
            if diam.is_zero() {
                diam = Rat::one();
            }
            diam * pow2(-40)
        }
    };
    let step = pow2_floor(&base_magnitude) * pow2(-(OFFSET_BITS as i64));
    let mut last_detail = String::new();
    for round in 0..max_retries {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "perturb", round as u64));
        let bound: i64 = 1 << OFFSET_BITS;
        let moved: Vec<Point> = points
            .iter()
            .map(|p| {
                let coords: Vec<Rat> = p
                    .coords()
                    .iter()
                    .map(|c| {
                        let num = rng.gen_range(-(bound - 1)..=(bound - 1));
                        c + &step * crate::scalar::rat(num)
                    })
                    .collect();
                Point::new(coords)
            })
            .collect();
        match general_position_report(&moved) {
            None => return Ok(moved),
            Some(detail) => last_detail = detail,
        }
    }
    Err(GeomError::PerturbationFailed { retries: max_retries, detail: last_detail })
}
