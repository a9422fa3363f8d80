//! Selection checks against the exact oracles, plus deterministic spatial
//! fixtures for the line families and the spread/narrow classifier.

use proptest::prelude::*;
use weaknet::geom::{simplex_line_intercept, Point, Simplex};
use weaknet::oracle::{
    best_piercing_point, generate_points, pierce_count, GenKind, GeneratorSpec, PierceTarget,
};
use weaknet::partition::vertical_partition;
use weaknet::scalar::{dot, nullspace_basis, rat, ratio, solve_linear, Rat};
use weaknet::schedule::Schedule;
use weaknet::selection::{
    classify_spread, first_selection_point, multiple_selection_lines, second_selection_point,
    SpreadClass,
};
use weaknet::util::for_each_subset;

fn gen_points(d: usize, n: usize, seed: u64) -> Vec<Point> {
    generate_points(&GeneratorSpec { kind: GenKind::UniformCube, d, n, seed })
        .expect("generator succeeds")
}

fn all_triples(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for_each_subset(n, 3, |pick| {
        out.push(pick.iter().map(|&i| i as u32).collect());
    });
    out
}

fn spanned_simplices(points: &[Point]) -> Vec<Simplex> {
    all_triples(points.len())
        .iter()
        .map(|t| {
            Simplex::new(t.iter().map(|&v| points[v as usize].clone()).collect())
                .expect("generated points are in general position")
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn first_selection_count_matches_the_exact_recount(
        (n, seed) in (3usize..=7, any::<u64>())
    ) {
        let points = gen_points(2, n, seed);
        let res = first_selection_point(&points).unwrap();
        prop_assert!(res.exhaustive);
        let simplices = spanned_simplices(&points);
        let recount =
            pierce_count(&PierceTarget::Point(res.point.clone()), &simplices).unwrap();
        prop_assert_eq!(res.pierced_count, recount);
        let sample = res.pierced_sample.unwrap();
        prop_assert_eq!(sample.len(), recount.min(64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn second_selection_dominates_the_piercing_oracle(
        (n, seed) in (4usize..=6, any::<u64>())
    ) {
        let points = gen_points(2, n, seed);
        let edges = all_triples(n);
        let sched = Schedule::default();
        let res = second_selection_point(&points, &edges, 1, seed ^ 0x5bd1_e995, &sched).unwrap();
        prop_assert!(res.exhaustive);

        let simplices = spanned_simplices(&points);
        let recount =
            pierce_count(&PierceTarget::Point(res.point.clone()), &simplices).unwrap();
        prop_assert_eq!(res.pierced_count, recount);
        let oracle = best_piercing_point(&simplices).unwrap();
        prop_assert!(res.pierced_count >= oracle.count);
    }
}

/// Rebuilds every line base from its provenance blocks: stack the affine
/// hull equations of each proxy block and solve the square system.
fn check_provenance(d: usize, n: usize, r: usize, seed: u64) {
    let points = gen_points(d, n, seed);
    let sched = Schedule::default();
    let vp = vertical_partition(&points, r, seed, &sched).unwrap();
    let ls = multiple_selection_lines(&vp);
    let m = d - 1;
    let cap = (r as u128).pow((m * m) as u32);
    assert!((ls.len() as u128) <= cap);
    for (line, blocks) in ls.lines().iter().zip(ls.origins()) {
        assert_eq!(line.dim(), d);
        assert_eq!(blocks.len(), m);
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        for block in blocks {
            assert_eq!(block.len(), m);
            let pts: Vec<&Point> = block
                .iter()
                .map(|&pid| ls.proxies()[pid as usize].as_ref().unwrap())
                .collect();
            let diffs: Vec<Vec<Rat>> = pts[1..]
                .iter()
                .map(|p| (0..m).map(|j| p.coord(j) - pts[0].coord(j)).collect())
                .collect();
            for u in nullspace_basis(&diffs, m) {
                let off = dot(&u, pts[0].coords());
                rows.push(u);
                rhs.push(off);
            }
        }
        assert_eq!(rows.len(), m);
        let rebuilt = solve_linear(&rows, &rhs).unwrap();
        assert_eq!(rebuilt.as_slice(), line.base().coords());
    }
}

#[test]
fn line_bases_rebuild_from_provenance_across_shapes() {
    check_provenance(2, 30, 5, 23);
    check_provenance(2, 40, 6, 7);
    check_provenance(3, 48, 4, 31);
    check_provenance(3, 60, 5, 12);
}

/// Seven separated planar clusters of four points each, lifted to distinct
/// heights. Three big clusters span a wide triangle; four auxiliary clusters
/// sit near its center so that a pair of auxiliary chords crosses deep
/// inside every triangle with one vertex per big cluster.
fn seven_cluster_points() -> Vec<Point> {
    let centers: [(i64, i64); 7] =
        [(0, 80), (-70, -40), (70, -41), (-20, 3), (21, -2), (-2, -21), (3, 22)];
    let mut points = Vec::new();
    for (c, &(cx, cy)) in centers.iter().enumerate() {
        for k in 1..=4i64 {
            let z = (c as i64) * 4 + k - 1;
            points.push(Point::new(vec![
                ratio(8 * cx + k, 8),
                ratio(32 * cy + k * k, 32),
                rat(z),
            ]));
        }
    }
    points
}

#[test]
fn classify_certifies_spread_for_separated_spatial_clusters() {
    let points = seven_cluster_points();
    let sched = Schedule::default();
    let vp = vertical_partition(&points, 7, 17, &sched).unwrap();

    // The partition recovers the clusters: four points per class, one class
    // per cluster.
    let mut cluster_owner = Vec::new();
    for c in 0..7 {
        let owner = vp.owner()[4 * c];
        for k in 0..4 {
            assert_eq!(vp.owner()[4 * c + k], owner);
        }
        cluster_owner.push(owner);
    }
    let mut distinct = cluster_owner.clone();
    distinct.sort_unstable();
    distinct.dedup();
    assert_eq!(distinct.len(), 7);

    let lines = multiple_selection_lines(&vp);
    assert!(!lines.is_empty());

    let mut cross_triples: Vec<Vec<u32>> = Vec::new();
    for a in 0..4u32 {
        for b in 4..8u32 {
            for c in 8..12u32 {
                cross_triples.push(vec![a, b, c]);
            }
        }
    }
    assert_eq!(cross_triples.len(), 64);

    match classify_spread(&points, &cross_triples, &vp, &lines, 0.019, &sched) {
        SpreadClass::Spread { line, pierced } => {
            assert_eq!(pierced.len(), 64);
            let witness = &lines.lines()[line];
            for &pi in &pierced {
                let triple = &cross_triples[pi as usize];
                let sx = Simplex::new(
                    triple.iter().map(|&p| points[p as usize].clone()).collect(),
                )
                .unwrap();
                assert!(simplex_line_intercept(&sx, witness).unwrap().is_some());
            }
        }
        other => panic!("expected a spread verdict, got {other:?}"),
    }
}

/// Three separated clusters of eight points hugging a common diagonal spine,
/// lifted to distinct heights. Too few classes for any line family, while a
/// line along the spine crosses every class simplex.
fn spine_points() -> Vec<Point> {
    let mut points = Vec::new();
    for i in 0..24i64 {
        let x = 100 * (i / 8) + (i % 8);
        points.push(Point::new(vec![rat(x), ratio(1024 * x + i * i, 1024), rat(i)]));
    }
    points
}

#[test]
fn classify_certifies_narrow_for_a_spine() {
    let points = spine_points();
    let sched = Schedule::default();
    let vp = vertical_partition(&points, 3, 29, &sched).unwrap();
    for part in vp.parts() {
        assert_eq!(part.points.len(), 8);
    }
    let lines = multiple_selection_lines(&vp);
    assert!(lines.is_empty());

    let triples = all_triples(points.len());
    match classify_spread(&points, &triples, &vp, &lines, 1.0, &sched) {
        SpreadClass::Narrow { witness, zone_points } => {
            assert_eq!(zone_points, 24);
            assert_eq!(witness.dim(), 2);
        }
        other => panic!("expected a narrow verdict, got {other:?}"),
    }
}
