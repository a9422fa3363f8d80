//! Seeded point-set generators for test corpora. Every generator is
//! deterministic in its seed, emits exact rational coordinates, and runs the
//! general-position repair pass before returning (a no-op for constructions
//! that are already generic).

use super::OracleError;
use crate::geom::{perturb_general_position, Point};
use crate::scalar::{dyadic, Rat};
use crate::util::derive_seed;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Coordinate grid for continuous sampling: dyadics with denominator 2^40,
/// fine enough that coordinate collisions are not expected at any test size.
const SAMPLE_BITS: u32 = 40;
const PERTURB_RETRIES: u32 = 32;

#[derive(Clone, Debug, PartialEq)]
pub enum GenKind {
    UniformCube,
    UniformBall,
    ConvexPosition,
    MomentCurve,
    Clustered { k: u32, spread: Rat },
    SurroundedClusters,
    ParaboloidSheet,
}

impl GenKind {
    /// Parses "uniform-cube", "clustered:K:SPREAD", etc.
    pub fn parse(s: &str) -> Result<GenKind, OracleError> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts[0] {
            "uniform-cube" if parts.len() == 1 => Ok(GenKind::UniformCube),
            "uniform-ball" if parts.len() == 1 => Ok(GenKind::UniformBall),
            "convex-position" if parts.len() == 1 => Ok(GenKind::ConvexPosition),
            "moment-curve" if parts.len() == 1 => Ok(GenKind::MomentCurve),
            "surrounded-clusters" if parts.len() == 1 => Ok(GenKind::SurroundedClusters),
            "paraboloid-sheet" if parts.len() == 1 => Ok(GenKind::ParaboloidSheet),
            "clustered" if parts.len() == 3 => {
                let k: u32 = parts[1]
                    .parse()
                    .map_err(|_| OracleError::BadInput(format!("bad cluster count: {}", parts[1])))?;
                if k == 0 {
                    return Err(OracleError::BadInput("cluster count must be positive".into()));
                }
                let spread = crate::scalar::parse_rat(parts[2])
                    .map_err(|e| OracleError::BadInput(format!("bad spread: {e}")))?;
                if spread <= Rat::zero() {
                    return Err(OracleError::BadInput("spread must be positive".into()));
                }
                Ok(GenKind::Clustered { k, spread })
            }
            _ => Err(OracleError::BadInput(format!("unknown generator kind: {s}"))),
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            GenKind::UniformCube => "uniform-cube",
            GenKind::UniformBall => "uniform-ball",
            GenKind::ConvexPosition => "convex-position",
            GenKind::MomentCurve => "moment-curve",
            GenKind::Clustered { .. } => "clustered",
            GenKind::SurroundedClusters => "surrounded-clusters",
            GenKind::ParaboloidSheet => "paraboloid-sheet",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenKind::Clustered { k, spread } => {
                write!(f, "clustered:{}:{}", k, crate::scalar::format_rat(spread))
            }
            other => write!(f, "{}", other.tag()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub kind: GenKind,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
}

/// Dyadic sample uniform over [lo, hi) on the 2^SAMPLE_BITS grid.
fn sample_unit(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(0..(1u64 << SAMPLE_BITS)) as i64;
    dyadic(num, SAMPLE_BITS)
}

fn sample_symmetric(rng: &mut ChaCha8Rng, scale: &Rat) -> Rat {
    let span = 1i64 << SAMPLE_BITS;
    let num = rng.gen_range(-(span - 1)..span);
    dyadic(num, SAMPLE_BITS) * scale
}

pub fn generate_points(spec: &GeneratorSpec) -> Result<Vec<Point>, OracleError> {
    if spec.n == 0 {
        return Err(OracleError::BadInput("n must be at least 1".into()));
    }
    if spec.d < 2 {
        return Err(OracleError::BadInput("dimension must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, spec.kind.tag(), 0));
    let raw = match &spec.kind {
        GenKind::UniformCube => uniform_cube(spec, &mut rng),
        GenKind::UniformBall => uniform_ball(spec, &mut rng),
        GenKind::ConvexPosition => convex_position(spec, &mut rng),
        GenKind::MomentCurve => moment_curve(spec, &mut rng),
        GenKind::Clustered { k, spread } => clustered(spec, &mut rng, *k, spread),
        GenKind::SurroundedClusters => surrounded_clusters(spec, &mut rng),
        GenKind::ParaboloidSheet => paraboloid_sheet(spec, &mut rng),
    };
    let repaired = perturb_general_position(
        &raw,
        None,
        derive_seed(spec.seed, "gen-repair", 0),
        PERTURB_RETRIES,
    )?;
    Ok(repaired)
}

fn uniform_cube(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..spec.n)
        .map(|_| Point::new((0..spec.d).map(|_| sample_unit(rng)).collect()))
        .collect()
}

fn uniform_ball(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let one = Rat::one();
    let mut out = Vec::with_capacity(spec.n);
    while out.len() < spec.n {
        let coords: Vec<Rat> = (0..spec.d).map(|_| sample_symmetric(rng, &one)).collect();
        let norm2: Rat = coords.iter().map(|c| c * c).sum();
        if norm2 <= one {
            out.push(Point::new(coords));
        }
    }
    out
}

/// Strictly increasing jittered parameters in (0, top).
fn jittered_params(n: usize, top: i64, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    let n_rat = Rat::from_integer((n as i64).into());
    (0..n)
        .map(|i| {
            let base = Rat::from_integer((i as i64).into()) + sample_unit(rng);
            base * Rat::from_integer(top.into()) / &n_rat
        })
        .collect()
}

/// d=2: distinct rational points on a circular arc (tangent half-angle
/// parametrization). d>=3: projections on the degree-(d-1) moment curve with
/// independent last coordinates. Either way the projections are in strictly
/// convex position, so no (d+1)-subset has a projected point inside the
/// projected hull of the others.
fn convex_position(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<Point> {
    if spec.d == 2 {
        let one = Rat::one();
        return jittered_params(spec.n, 3, rng)
            .into_iter()
            .map(|t| {
                let t2 = &t * &t;
                let den = &one + &t2;
                let x = (&one - &t2) / &den;
                let y = (Rat::from_integer(2.into()) * &t) / &den;
                Point::new(vec![x, y])
            })
            .collect();
    }
    let params = jittered_params(spec.n, 1, rng);
    params
        .into_iter()
        .enumerate()
        .map(|(i, u)| {
            let mut coords = moment_coords(&u, spec.d - 1);
            // Distinct heights by construction: jitter plus a spaced offset.
            let lift = sample_unit(rng)
                + Rat::from_integer((i as i64).into()) / Rat::from_integer((spec.n as i64).into());
            coords.push(lift);
            Point::new(coords)
        })
        .collect()
}

fn moment_coords(t: &Rat, arity: usize) -> Vec<Rat> {
    let mut coords = Vec::with_capacity(arity);
    let mut pow = t.clone();
    for _ in 0..arity {
        coords.push(pow.clone());
        pow = &pow * t;
    }
    coords
}

fn moment_curve(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<Point> {
    jittered_params(spec.n, 1, rng)
        .into_iter()
        .map(|t| Point::new(moment_coords(&t, spec.d)))
        .collect()
}

fn clustered(spec: &GeneratorSpec, rng: &mut ChaCha8Rng, k: u32, spread: &Rat) -> Vec<Point> {
    let centers: Vec<Vec<Rat>> = (0..k)
        .map(|_| (0..spec.d).map(|_| sample_unit(rng)).collect())
        .collect();
    (0..spec.n)
        .map(|i| {
            let c = &centers[i % k as usize];
            Point::new(
                (0..spec.d)
                    .map(|j| &c[j] + sample_symmetric(rng, spread))
                    .collect(),
            )
        })
        .collect()
}

/// d+1 tight clusters: d whose projected centers span a scaled simplex in
/// R^{d-1}, and one whose projected center is that simplex's centroid. The
/// cluster radius is far smaller than the centroid's distance to the simplex
/// boundary, so the projected hull of the outer clusters strictly contains
/// every projection of the inner cluster.
fn surrounded_clusters(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let d = spec.d;
    let scale = Rat::from_integer(4.into());
    let mut centers: Vec<Vec<Rat>> = Vec::with_capacity(d + 1);
    // Outer projected centers: origin and scale * e_j for j < d-1.
    centers.push(vec![Rat::zero(); d - 1]);
    for j in 0..(d - 1) {
        let mut c = vec![Rat::zero(); d - 1];
        c[j] = scale.clone();
        centers.push(c);
    }
    // Inner projected center: centroid of the outer centers.
    let d_rat = Rat::from_integer((d as i64).into());
    let centroid: Vec<Rat> = (0..(d - 1))
        .map(|j| centers.iter().map(|c| c[j].clone()).sum::<Rat>() / &d_rat)
        .collect();
    centers.push(centroid);
    let radius = dyadic(1, 5);
    (0..spec.n)
        .map(|i| {
            let cluster = i % (d + 1);
            let mut coords: Vec<Rat> = (0..(d - 1))
                .map(|j| &centers[cluster][j] + sample_symmetric(rng, &radius))
                .collect();
            let height = Rat::from_integer((2 * cluster as i64).into())
                + sample_symmetric(rng, &radius);
            coords.push(height);
            Point::new(coords)
        })
        .collect()
}

/// Projections on a strictly convex curve with the last coordinate equal to
/// the squared norm of the projection: a vertically convex sheet.
fn paraboloid_sheet(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<Point> {
    jittered_params(spec.n, 1, rng)
        .into_iter()
        .map(|t| {
            let mut coords = moment_coords(&t, spec.d - 1);
            let lift: Rat = coords.iter().map(|c| c * c).sum();
            coords.push(lift);
            Point::new(coords)
        })
        .collect()
}
