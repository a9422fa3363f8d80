//! Exact convex-hull membership via margin and supporting-direction programs.
//!
//! For a query q and a finite set S with rows a_i = s_i - q:
//!
//! Margin program: maximize t subject to <v, a_i> >= t and sum(v+ + v-) = 1.
//! Splitting v into nonnegative parts admits the spurious solution
//! v+ = v- (v = 0, t = 0), so the optimum is max(0, best separation width):
//! strictly positive iff q lies outside conv(S), zero iff q is in the hull.
//!
//! Supporting probes: for q in the hull, q is on the boundary iff the cone
//! { v : A v >= 0 } is nontrivial, which holds iff one of the 2d programs
//! "maximize +-v_j subject to A v >= 0, +-v_j <= 1" attains 1. All probes at
//! zero means q is interior.
//!
//! Both programs are solved exactly by row generation: a small working subset
//! of rows is solved over rationals, the optimal direction is scanned against
//! all rows with float filtering, and violated rows join the working set. A
//! float LP plus exact certificate scan short-circuits clear outside queries.

use super::{GeomError, Point};
use crate::lp::{self, Constraint, Lp, LpResult, Rel};
use crate::scalar::{dot_f64, Rat, Sign};
use num::{BigRational, FromPrimitive, One, Signed, Zero};

/// Classification of a point against a convex hull.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HullPosition {
    Interior,
    Boundary,
    Outside,
}

impl std::fmt::Display for HullPosition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            HullPosition::Interior => "interior",
            HullPosition::Boundary => "boundary",
            HullPosition::Outside => "outside",
        };
        write!(f, "{s}")
    }
}

const EXACT_PIVOT_CAP: usize = 400_000;
const FLOAT_PIVOT_CAP: usize = 2_000;
/// Above this row count the dense float LP tableau is not worth building;
/// seeding and certification fall back to axis-extreme scans.
const FLOAT_LP_ROW_CAP: usize = 512;

/// Exact classification of `q` against conv(S).
pub fn point_in_hull(q: &Point, s: &[Point]) -> Result<HullPosition, GeomError> {
    if s.is_empty() {
        return Err(GeomError::TooFew { needed: 1 });
    }
    let d = q.dim();
    for p in s {
        if p.dim() != d {
            return Err(GeomError::DimensionMismatch { expected: d, got: p.dim() });
        }
    }
    // Fast path: a float LP that claims strict separation is confirmed by an
    // exact scan of the rationalized direction.
    if s.len() > 8 && s.len() <= FLOAT_LP_ROW_CAP {
        if let Some(v) = float_margin_direction(q, s) {
            if certified_outside(q, s, &v) {
                return Ok(HullPosition::Outside);
            }
        }
    }
    // Large sets: try the axis-gap certificate before any LP. A query beyond
    // the bounding box in some coordinate is outside.
    if s.len() > FLOAT_LP_ROW_CAP {
        for j in 0..d {
            let mut lo = s[0].coord(j).clone();
            let mut hi = lo.clone();
            for p in &s[1..] {
                if p.coord(j) < &lo {
                    lo = p.coord(j).clone();
                }
                if p.coord(j) > &hi {
                    hi = p.coord(j).clone();
                }
            }
            if q.coord(j) > &hi || q.coord(j) < &lo {
                return Ok(HullPosition::Outside);
            }
        }
    }
    let (t, _) = hull_margin(q, s)?;
    if t.is_positive() {
        return Ok(HullPosition::Outside);
    }
    // q is in the hull; boundary iff a supporting direction exists.
    if has_supporting_direction(q, s)? {
        Ok(HullPosition::Boundary)
    } else {
        Ok(HullPosition::Interior)
    }
}

/// Exact margin optimum together with an optimal direction (L1 norm at most
/// one). The value is strictly positive iff q lies outside conv(S) (then v is
/// a strict separator); it is zero iff q is in the hull.
pub fn hull_margin(q: &Point, s: &[Point]) -> Result<(Rat, Vec<Rat>), GeomError> {
    if s.is_empty() {
        return Err(GeomError::TooFew { needed: 1 });
    }
    let d = q.dim();
    let small_cap = 3 * d + 9;
    if s.len() <= small_cap {
        let all: Vec<usize> = (0..s.len()).collect();
        return margin_exact_on(q, s, &all);
    }

    // Seed the working set: float-binding rows when the float LP is cheap,
    // coordinate-extreme rows otherwise.
    let float_seed = if s.len() <= FLOAT_LP_ROW_CAP {
        float_margin_direction(q, s)
    } else {
        None
    };
    let mut working: Vec<usize> = match float_seed {
        Some(v) => {
            let mut margins: Vec<(f64, usize)> = s
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let a: Vec<f64> =
                        (0..d).map(|j| p.approx()[j] - q.approx()[j]).collect();
                    (dot_f64(&v, &a).0, i)
                })
                .collect();
            margins.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
            margins.iter().take(2 * d + 4).map(|&(_, i)| i).collect()
        }
        None => axis_extreme_rows(s, d),
    };
    working.sort_unstable();
    working.dedup();

    let mut in_working = vec![false; s.len()];
    for &i in &working {
        in_working[i] = true;
    }
    loop {
        let (t, v) = margin_exact_on(q, s, &working)?;
        // Subset optimum zero is already the global optimum: rows only lower
        // the maximum and v = 0, t = 0 stays feasible.
        if t.is_zero() {
            return Ok((t, v));
        }
        match worst_violator(q, s, &v, &t, &in_working) {
            None => return Ok((t, v)),
            Some(batch) => {
                for i in batch {
                    in_working[i] = true;
                    working.push(i);
                }
            }
        }
    }
}

/// Row indices extreme in each coordinate (by float value), plus leading
/// rows as ballast: a cheap working-set seed for large sets.
fn axis_extreme_rows(s: &[Point], d: usize) -> Vec<usize> {
    let mut rows: Vec<usize> = (0..(d + 2).min(s.len())).collect();
    for j in 0..d {
        let mut lo = 0usize;
        let mut hi = 0usize;
        for (i, p) in s.iter().enumerate() {
            if p.approx()[j] < s[lo].approx()[j] {
                lo = i;
            }
            if p.approx()[j] > s[hi].approx()[j] {
                hi = i;
            }
        }
        rows.push(lo);
        rows.push(hi);
    }
    rows
}

/// Rows with exact <v, a_i> strictly below t, worst first, capped at three.
fn worst_violator(
    q: &Point,
    s: &[Point],
    v: &[Rat],
    t: &Rat,
    in_working: &[bool],
) -> Option<Vec<usize>> {
    let d = q.dim();
    let vf: Vec<f64> = v.iter().map(crate::scalar::to_f64).collect();
    let tf = crate::scalar::to_f64(t);
    let tf_err = tf.abs() * 4.0 * f64::EPSILON;
    let mut violators: Vec<(Rat, usize)> = Vec::new();
    for (i, p) in s.iter().enumerate() {
        if in_working[i] {
            continue;
        }
        let a: Vec<f64> = (0..d).map(|j| p.approx()[j] - q.approx()[j]).collect();
        let (val, err) = dot_f64(&vf, &a);
        // Certified at or above the optimum: cannot be binding.
        if val - err > tf + tf_err {
            continue;
        }
        let exact: Rat = (0..d).map(|j| &v[j] * &(p.coord(j) - q.coord(j))).sum();
        if &exact < t {
            violators.push((exact, i));
        }
    }
    if violators.is_empty() {
        return None;
    }
    violators.sort_by(|x, y| x.0.cmp(&y.0));
    Some(violators.into_iter().take(3).map(|(_, i)| i).collect())
}

/// True iff some nonzero v has <v, s_i - q> >= 0 for all i (a hyperplane
/// through q supporting conv(S)). Row-generated exact probes along +-e_j.
fn has_supporting_direction(q: &Point, s: &[Point]) -> Result<bool, GeomError> {
    let d = q.dim();
    for axis in 0..d {
        for positive in [true, false] {
            if probe_axis(q, s, axis, positive)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Maximizes +-v_axis over { A v >= 0, +-v_axis <= 1 }; true iff the optimum
/// is positive (it is then exactly 1 by scaling).
fn probe_axis(q: &Point, s: &[Point], axis: usize, positive: bool) -> Result<bool, GeomError> {
    let d = q.dim();
    let mut working: Vec<usize> = (0..(2 * d + 4).min(s.len())).collect();
    let mut in_working = vec![false; s.len()];
    for &i in &working {
        in_working[i] = true;
    }
    loop {
        let (value, v) = probe_exact_on(q, s, &working, axis, positive)?;
        if !value.is_positive() {
            // Subset optimum zero bounds the global optimum from above.
            return Ok(false);
        }
        // Exact scan: any row with <v, a_i> < 0 refutes the subset optimum.
        let vf: Vec<f64> = v.iter().map(crate::scalar::to_f64).collect();
        let mut violated: Vec<usize> = Vec::new();
        for (i, p) in s.iter().enumerate() {
            if in_working[i] {
                continue;
            }
            let a: Vec<f64> = (0..d).map(|j| p.approx()[j] - q.approx()[j]).collect();
            let (val, err) = dot_f64(&vf, &a);
            if val - err > 0.0 {
                continue;
            }
            let exact: Rat = (0..d).map(|j| &v[j] * &(p.coord(j) - q.coord(j))).sum();
            if exact.is_negative() {
                violated.push(i);
                if violated.len() >= 3 {
                    break;
                }
            }
        }
        if violated.is_empty() {
            return Ok(true);
        }
        for i in violated {
            in_working[i] = true;
            working.push(i);
        }
    }
}

fn probe_exact_on(
    q: &Point,
    s: &[Point],
    idxs: &[usize],
    axis: usize,
    positive: bool,
) -> Result<(Rat, Vec<Rat>), GeomError> {
    let d = q.dim();
    // Variables v+ then v-.
    let n_vars = 2 * d;
    let mut constraints = Vec::with_capacity(idxs.len() + 1);
    for &i in idxs {
        // -<v, a_i> <= 0.
        let mut coeffs = vec![Rat::zero(); n_vars];
        for j in 0..d {
            let a = s[i].coord(j) - q.coord(j);
            coeffs[j] = -a.clone();
            coeffs[d + j] = a;
        }
        constraints.push(Constraint { coeffs, rel: Rel::Le, rhs: Rat::zero() });
    }
    // +-v_axis <= 1.
    let mut cap = vec![Rat::zero(); n_vars];
    if positive {
        cap[axis] = Rat::one();
        cap[d + axis] = -Rat::one();
    } else {
        cap[axis] = -Rat::one();
        cap[d + axis] = Rat::one();
    }
    constraints.push(Constraint { coeffs: cap.clone(), rel: Rel::Le, rhs: Rat::one() });
    let lp = Lp { n_vars, maximize: cap, constraints };
    match lp::solve(&lp, EXACT_PIVOT_CAP) {
        LpResult::Optimal { value, x } => {
            let v: Vec<Rat> = (0..d).map(|j| &x[j] - &x[d + j]).collect();
            Ok((value, v))
        }
        LpResult::Stalled => Err(GeomError::LpStalled),
        other => unreachable!("probe LP is feasible and capped, got {other:?}"),
    }
}

/// Closed membership of q in the hull of at most d+1 points, by barycentric
/// orientation signs when the points span a full simplex and by the general
/// classifier otherwise. Exact.
pub fn point_in_simplex_closed(q: &Point, verts: &[Point]) -> Result<bool, GeomError> {
    let d = q.dim();
    if verts.len() == d + 1 {
        let refs: Vec<&Point> = verts.iter().collect();
        let base = super::orient(&refs)?;
        if base != Sign::Zero {
            for i in 0..verts.len() {
                let mut repl = refs.clone();
                repl[i] = q;
                let s = super::orient(&repl)?;
                if s != Sign::Zero && s != base {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
    }
    Ok(point_in_hull(q, verts)? != HullPosition::Outside)
}

/// Strict interior membership of q in the hull of exactly d+1 points. A
/// degenerate vertex tuple has empty interior and always reports false.
/// Exact.
pub fn point_strictly_in_simplex(q: &Point, verts: &[Point]) -> Result<bool, GeomError> {
    let d = q.dim();
    if verts.len() != d + 1 {
        return Err(GeomError::WrongCount { expected: d + 1, got: verts.len() });
    }
    let refs: Vec<&Point> = verts.iter().collect();
    let base = super::orient(&refs)?;
    if base == Sign::Zero {
        return Ok(false);
    }
    for i in 0..verts.len() {
        let mut repl = refs.clone();
        repl[i] = q;
        if super::orient(&repl)? != base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Confirms that the rationalization of `v_float` strictly separates `q` from
/// every point of `s`. A `true` answer is an exact certificate that q lies
/// outside conv(s); `false` is inconclusive.
pub fn certified_outside(q: &Point, s: &[Point], v_float: &[f64]) -> bool {
    let d = q.dim();
    if v_float.len() != d {
        return false;
    }
    let v: Vec<Rat> = v_float
        .iter()
        .map(|&x| BigRational::from_f64(x).unwrap_or_else(Rat::zero))
        .collect();
    if v.iter().all(|c| c.is_zero()) {
        return false;
    }
    let vf: Vec<f64> = v.iter().map(crate::scalar::to_f64).collect();
    for p in s {
        let a: Vec<f64> = (0..d).map(|j| p.approx()[j] - q.approx()[j]).collect();
        let (val, err) = dot_f64(&vf, &a);
        match Sign::of_f64_filtered(val, err) {
            Some(Sign::Pos) => continue,
            _ => {
                let exact: Rat = (0..d)
                    .map(|j| &v[j] * &(p.coord(j) - q.coord(j)))
                    .sum();
                if !exact.is_positive() {
                    return false;
                }
            }
        }
    }
    true
}

/// Optimal direction of the float margin LP, when it solves cleanly.
fn float_margin_direction(q: &Point, s: &[Point]) -> Option<Vec<f64>> {
    let d = q.dim();
    let lp = build_margin_lp_f64(q, s);
    match lp::solve(&lp, FLOAT_PIVOT_CAP) {
        LpResult::Optimal { x, .. } => {
            let v: Vec<f64> = (0..d).map(|j| x[j] - x[d + j]).collect();
            if v.iter().all(|c| c.abs() < 1e-12) {
                None
            } else {
                Some(v)
            }
        }
        _ => None,
    }
}

fn build_margin_lp_f64(q: &Point, s: &[Point]) -> Lp<f64> {
    let d = q.dim();
    let n_vars = 2 * d + 2;
    let mut constraints = Vec::with_capacity(s.len() + 1);
    for p in s {
        let mut coeffs = vec![0.0; n_vars];
        for j in 0..d {
            let a = p.approx()[j] - q.approx()[j];
            coeffs[j] = -a;
            coeffs[d + j] = a;
        }
        coeffs[2 * d] = 1.0;
        coeffs[2 * d + 1] = -1.0;
        constraints.push(Constraint { coeffs, rel: Rel::Le, rhs: 0.0 });
    }
    let mut norm = vec![1.0; n_vars];
    norm[2 * d] = 0.0;
    norm[2 * d + 1] = 0.0;
    constraints.push(Constraint { coeffs: norm, rel: Rel::Eq, rhs: 1.0 });
    let mut maximize = vec![0.0; n_vars];
    maximize[2 * d] = 1.0;
    maximize[2 * d + 1] = -1.0;
    Lp { n_vars, maximize, constraints }
}

/// Exact margin LP restricted to the rows in `idxs`.
fn margin_exact_on(q: &Point, s: &[Point], idxs: &[usize]) -> Result<(Rat, Vec<Rat>), GeomError> {
    let d = q.dim();
    let n_vars = 2 * d + 2;
    let mut constraints = Vec::with_capacity(idxs.len() + 1);
    for &i in idxs {
        let mut coeffs = vec![Rat::zero(); n_vars];
        for j in 0..d {
            let a = s[i].coord(j) - q.coord(j);
            coeffs[j] = -a.clone();
            coeffs[d + j] = a;
        }
        coeffs[2 * d] = Rat::one();
        coeffs[2 * d + 1] = -Rat::one();
        constraints.push(Constraint { coeffs, rel: Rel::Le, rhs: Rat::zero() });
    }
    let mut norm = vec![Rat::one(); n_vars];
    norm[2 * d] = Rat::zero();
    norm[2 * d + 1] = Rat::zero();
    constraints.push(Constraint { coeffs: norm, rel: Rel::Eq, rhs: Rat::one() });
    let mut maximize = vec![Rat::zero(); n_vars];
    maximize[2 * d] = Rat::one();
    maximize[2 * d + 1] = -Rat::one();
    let lp = Lp { n_vars, maximize, constraints };
    match lp::solve(&lp, EXACT_PIVOT_CAP) {
        LpResult::Optimal { value, x } => {
            let v: Vec<Rat> = (0..d).map(|j| &x[j] - &x[d + j]).collect();
            Ok((value, v))
        }
        LpResult::Stalled => Err(GeomError::LpStalled),
        other => unreachable!("margin LP is always feasible and bounded, got {other:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn pt(coords: &[i64]) -> Point {
        Point::from_i64(coords)
    }

    fn ptr(coords: &[(i64, i64)]) -> Point {
        Point::new(coords.iter().map(|&(p, q)| ratio(p, q)).collect())
    }

    fn triangle() -> Vec<Point> {
        vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]
    }

    #[test]
    fn interior_point_of_triangle() {
        let q = ptr(&[(1, 4), (1, 4)]);
        assert_eq!(point_in_hull(&q, &triangle()).unwrap(), HullPosition::Interior);
    }

    #[test]
    fn outside_point_of_triangle() {
        let q = pt(&[1, 1]);
        assert_eq!(point_in_hull(&q, &triangle()).unwrap(), HullPosition::Outside);
    }

    #[test]
    fn edge_midpoint_is_boundary() {
        let q = ptr(&[(1, 2), (1, 2)]);
        assert_eq!(point_in_hull(&q, &triangle()).unwrap(), HullPosition::Boundary);
    }

    #[test]
    fn vertex_is_boundary() {
        let q = pt(&[0, 0]);
        assert_eq!(point_in_hull(&q, &triangle()).unwrap(), HullPosition::Boundary);
    }

    #[test]
    fn singleton_hull() {
        let s = vec![pt(&[3, 4])];
        assert_eq!(point_in_hull(&pt(&[3, 4]), &s).unwrap(), HullPosition::Boundary);
        assert_eq!(point_in_hull(&pt(&[3, 5]), &s).unwrap(), HullPosition::Outside);
    }

    #[test]
    fn flat_hull_has_no_interior() {
        // Three collinear points in the plane.
        let s = vec![pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 2])];
        assert_eq!(point_in_hull(&pt(&[1, 1]), &s).unwrap(), HullPosition::Boundary);
        assert_eq!(point_in_hull(&pt(&[1, 0]), &s).unwrap(), HullPosition::Outside);
    }

    #[test]
    fn three_dimensional_cases() {
        let s = vec![
            pt(&[0, 0, 0]),
            pt(&[1, 0, 0]),
            pt(&[0, 1, 0]),
            pt(&[0, 0, 1]),
        ];
        assert_eq!(
            point_in_hull(&ptr(&[(1, 8), (1, 8), (1, 8)]), &s).unwrap(),
            HullPosition::Interior
        );
        assert_eq!(point_in_hull(&pt(&[1, 1, 1]), &s).unwrap(), HullPosition::Outside);
        assert_eq!(
            point_in_hull(&ptr(&[(1, 3), (1, 3), (1, 3)]), &s).unwrap(),
            HullPosition::Boundary
        );
    }

    #[test]
    fn row_generation_on_larger_set() {
        // A scattered cloud plus four far corners; queries at the center and
        // far outside exercise the working-set loop.
        let mut s = Vec::new();
        for k in 0..20i64 {
            s.push(ptr(&[(((k * 7919) % 2000) - 1000, 1000), (((k * 104729) % 2000) - 1000, 1000)]));
        }
        s.push(pt(&[2, 0]));
        s.push(pt(&[-2, 0]));
        s.push(pt(&[0, 2]));
        s.push(pt(&[0, -2]));
        assert_eq!(point_in_hull(&pt(&[0, 0]), &s).unwrap(), HullPosition::Interior);
        assert_eq!(point_in_hull(&pt(&[5, 5]), &s).unwrap(), HullPosition::Outside);
        let (t, v) = hull_margin(&pt(&[5, 5]), &s).unwrap();
        assert!(t.is_positive());
        let l1: Rat = v.iter().map(|c| c.abs()).sum();
        assert!(l1 <= rat(1));
    }

    #[test]
    fn simplex_membership_matches_classifier() {
        let s = triangle();
        for (q, expect_closed, expect_strict) in [
            (ptr(&[(1, 4), (1, 4)]), true, true),
            (ptr(&[(1, 2), (1, 2)]), true, false),
            (pt(&[0, 0]), true, false),
            (pt(&[1, 1]), false, false),
        ] {
            assert_eq!(point_in_simplex_closed(&q, &s).unwrap(), expect_closed);
            assert_eq!(point_strictly_in_simplex(&q, &s).unwrap(), expect_strict);
        }
        // Degenerate tuple: closed membership still answered, no interior.
        let flat = vec![pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 2])];
        assert!(point_in_simplex_closed(&pt(&[1, 1]), &flat).unwrap());
        assert!(!point_strictly_in_simplex(&pt(&[1, 1]), &flat).unwrap());
        // One-dimensional strict betweenness.
        let seg = vec![pt(&[0]), pt(&[4])];
        assert!(point_strictly_in_simplex(&pt(&[1]), &seg).unwrap());
        assert!(!point_strictly_in_simplex(&pt(&[4]), &seg).unwrap());
        assert!(!point_strictly_in_simplex(&pt(&[5]), &seg).unwrap());
    }

    #[test]
    fn margin_is_zero_inside() {
        let (t, _) = hull_margin(&ptr(&[(1, 4), (1, 4)]), &triangle()).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn margin_direction_certifies_outside() {
        let s = triangle();
        let q = pt(&[2, 2]);
        let (t, v) = hull_margin(&q, &s).unwrap();
        assert!(t.is_positive());
        let vf: Vec<f64> = v.iter().map(crate::scalar::to_f64).collect();
        assert!(certified_outside(&q, &s, &vf));
        assert!(!certified_outside(&pt(&[0, 0]), &s, &vf));
    }
}
