//! End-to-end drive of the public surface: seeded generation, exhaustive
//! verification of a trivial net, then a planted failure whose violation
//! report must round-trip through JSON with exact scalars.

use weaknet::geom::{point_in_hull, HullPosition, Point};
use weaknet::oracle::{
    generate_points, verify_weak_net, vertical_delta_convexity, GenKind, GeneratorSpec,
    SubsetFilter, VerifyMode,
};
use weaknet::scalar::ratio;

#[test]
fn generate_verify_and_report_round_trip() {
    let spec = GeneratorSpec { kind: GenKind::UniformBall, d: 2, n: 18, seed: 11 };
    let p = generate_points(&spec).unwrap();
    assert_eq!(p.len(), 18);
    let again = generate_points(&spec).unwrap();
    assert_eq!(p, again);

    let eps = ratio(1, 2);

    // The point set is a weak net for itself.
    let clean = verify_weak_net(&p, &eps, &p, &VerifyMode::Exhaustive, &SubsetFilter::All, 0, 2)
        .unwrap();
    assert!(clean.violation.is_none());
    assert_eq!(clean.evidence(), "exhaustive-proof");

    // A single distant net point misses every witness.
    let bad_net = vec![Point::from_i64(&[5_000, 5_000])];
    let broken =
        verify_weak_net(&p, &eps, &bad_net, &VerifyMode::Exhaustive, &SubsetFilter::All, 0, 2)
            .unwrap();
    let violation = broken.violation.expect("distant net point pierces nothing");
    let witness: Vec<Point> = violation.subset.iter().map(|&i| p[i as usize].clone()).collect();
    assert_eq!(point_in_hull(&bad_net[0], &witness).unwrap(), HullPosition::Outside);

    let json = violation.report_json();
    assert!(json["subset"].is_array());
    assert!(json["certificates"].is_array());

    // Convexity measurement runs on the same instance without error.
    let frac = vertical_delta_convexity(&p).unwrap();
    assert!(frac >= ratio(0, 1) && frac <= ratio(1, 1));
}
