//! Property tests for the exact geometry layer: orientation predicates, hull
//! membership, simplex-line intercepts, and general-position perturbation.

use proptest::prelude::*;
use weaknet::geom::{
    certified_outside, hull_margin, is_general_position, orient, perturb_general_position,
    point_in_hull, simplex_line_intercept, HullPosition, Point, Simplex, VerticalLine,
};
use weaknet::scalar::{rat, ratio, Rat, Sign};
use num::{Signed, Zero};

fn small_point(d: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(-4i64..=4, d).prop_map(|c| Point::from_i64(&c))
}

fn small_set(d: usize, max_len: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(small_point(d), 1..=max_len)
}

/// Orientation test of q against the triangle (a, b, c), exact.
fn in_triangle(q: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    let o = orient(&[a, b, c]).unwrap();
    if o == Sign::Zero {
        return false;
    }
    for (u, v) in [(a, b), (b, c), (c, a)] {
        let s = orient(&[u, v, q]).unwrap();
        if s != Sign::Zero && s != o {
            return false;
        }
    }
    true
}

/// Membership in conv(S) for planar S by checking every triangle and every
/// segment, using only orientation signs.
fn in_hull_by_triangles(q: &Point, s: &[Point]) -> bool {
    for p in s {
        if p.coords() == q.coords() {
            return true;
        }
    }
    let n = s.len();
    for i in 0..n {
        for j in (i + 1)..n {
            // On the segment s_i s_j: collinear and between in both coords.
            if orient(&[&s[i], &s[j], q]).unwrap() == Sign::Zero {
                let between = (0..2).all(|k| {
                    let lo = s[i].coord(k).min(s[j].coord(k));
                    let hi = s[i].coord(k).max(s[j].coord(k));
                    lo <= q.coord(k) && q.coord(k) <= hi
                });
                if between {
                    return true;
                }
            }
            for k in (j + 1)..n {
                if in_triangle(q, &s[i], &s[j], &s[k]) {
                    return true;
                }
            }
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orientation_flips_under_swap(pts in prop::collection::vec(small_point(2), 3)) {
        let refs: Vec<&Point> = pts.iter().collect();
        let a = orient(&refs).unwrap();
        let swapped = vec![&pts[1], &pts[0], &pts[2]];
        let b = orient(&swapped).unwrap();
        prop_assert_eq!(a, b.flip());
    }

    #[test]
    fn membership_matches_triangle_decomposition(
        q in small_point(2),
        s in small_set(2, 7),
    ) {
        let pos = point_in_hull(&q, &s).unwrap();
        let inside = in_hull_by_triangles(&q, &s);
        prop_assert_eq!(pos != HullPosition::Outside, inside);
    }

    #[test]
    fn membership_is_translation_invariant(
        q in small_point(2),
        s in small_set(2, 6),
        t in prop::collection::vec(-3i64..=3, 2),
    ) {
        let shift = Point::from_i64(&t);
        let qs = Point::new(vec![q.coord(0) + shift.coord(0), q.coord(1) + shift.coord(1)]);
        let ss: Vec<Point> = s
            .iter()
            .map(|p| Point::new(vec![p.coord(0) + shift.coord(0), p.coord(1) + shift.coord(1)]))
            .collect();
        prop_assert_eq!(point_in_hull(&q, &s).unwrap(), point_in_hull(&qs, &ss).unwrap());
    }

    #[test]
    fn membership_ignores_duplicates_and_order(
        q in small_point(2),
        s in small_set(2, 5),
    ) {
        let base = point_in_hull(&q, &s).unwrap();
        let mut doubled: Vec<Point> = s.iter().rev().cloned().collect();
        doubled.extend(s.iter().cloned());
        prop_assert_eq!(point_in_hull(&q, &doubled).unwrap(), base);
    }

    #[test]
    fn positive_margin_is_a_valid_certificate(
        q in small_point(2),
        s in small_set(2, 6),
    ) {
        let (t, v) = hull_margin(&q, &s).unwrap();
        if t.is_positive() {
            // Every row clears the claimed margin.
            for p in &s {
                let dot: Rat = (0..2).map(|j| &v[j] * &(p.coord(j) - q.coord(j))).sum();
                prop_assert!(dot >= t);
            }
            let vf: Vec<f64> = v.iter().map(weaknet::scalar::to_f64).collect();
            prop_assert!(certified_outside(&q, &s, &vf));
            prop_assert_eq!(point_in_hull(&q, &s).unwrap(), HullPosition::Outside);
        } else {
            prop_assert!(t.is_zero());
            prop_assert_ne!(point_in_hull(&q, &s).unwrap(), HullPosition::Outside);
        }
    }

    #[test]
    fn simplex_vertices_and_barycenter_classify(
        mut pts in prop::collection::vec(small_point(3), 4),
    ) {
        prop_assume!({
            let refs: Vec<&Point> = pts.iter().collect();
            orient(&refs).unwrap() != Sign::Zero
        });
        let four = rat(4);
        let bary = Point::new(
            (0..3)
                .map(|j| pts.iter().map(|p| p.coord(j).clone()).sum::<Rat>() / &four)
                .collect(),
        );
        prop_assert_eq!(point_in_hull(&bary, &pts).unwrap(), HullPosition::Interior);
        prop_assert_eq!(point_in_hull(&pts[0], &pts).unwrap(), HullPosition::Boundary);
        let beyond = Point::new(
            (0..3)
                .map(|j| pts[0].coord(j) * rat(2) - bary.coord(j))
                .collect(),
        );
        prop_assert_eq!(point_in_hull(&beyond, &pts).unwrap(), HullPosition::Outside);
        pts.clear();
    }

    #[test]
    fn intercept_lies_on_the_simplex_hyperplane(
        pts in prop::collection::vec(small_point(3), 3),
        base in prop::collection::vec(-4i64..=4, 2),
    ) {
        prop_assume!({
            let refs: Vec<&Point> = pts.iter().collect();
            weaknet::geom::affine_rank(&refs) == 2
        });
        let tau = Simplex::new(pts.clone()).unwrap();
        let line = VerticalLine::new(Point::from_i64(&base));
        match simplex_line_intercept(&tau, &line) {
            Ok(Some(hit)) => {
                // The hit satisfies the exact plane equation through the
                // three vertices and sits over the query base.
                let refs: Vec<&Point> = pts.iter().collect();
                let h = weaknet::geom::Hyperplane::through_points(&refs, None).unwrap();
                prop_assert_eq!(Sign::of(&h.eval(&hit)), Sign::Zero);
                prop_assert_eq!(hit.coord(0), &ratio(base[0], 1));
                prop_assert_eq!(hit.coord(1), &ratio(base[1], 1));
                // The base is inside the projected triangle.
                let proj: Vec<Point> = pts.iter().map(|p| p.project()).collect();
                let b = Point::from_i64(&base);
                prop_assert_ne!(point_in_hull(&b, &proj).unwrap(), HullPosition::Outside);
            }
            Ok(None) => {
                let proj: Vec<Point> = pts.iter().map(|p| p.project()).collect();
                let b = Point::from_i64(&base);
                prop_assert_eq!(point_in_hull(&b, &proj).unwrap(), HullPosition::Outside);
            }
            Err(_) => {
                // Vertical simplexes are rejected; nothing further to check.
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn perturbation_repairs_and_respects_magnitude(
        coords in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 4..=7),
        seed in 0u64..1_000,
    ) {
        let pts: Vec<Point> = coords.iter().map(|c| Point::from_i64(c)).collect();
        let magnitude = ratio(1, 64);
        let out = perturb_general_position(&pts, Some(&magnitude), seed, 32).unwrap();
        prop_assert!(is_general_position(&out));
        prop_assert_eq!(out.len(), pts.len());
        for (a, b) in pts.iter().zip(&out) {
            for j in 0..2 {
                let diff = (a.coord(j) - b.coord(j)).abs();
                prop_assert!(diff <= magnitude);
            }
        }
        // A second run under the same seed reproduces the output exactly.
        let again = perturb_general_position(&pts, Some(&magnitude), seed, 32).unwrap();
        let same = out.iter().zip(&again).all(|(x, y)| x.coords() == y.coords());
        prop_assert!(same);
        let _ = Rat::zero();
    }
}
