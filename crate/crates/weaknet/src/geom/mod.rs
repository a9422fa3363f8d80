//! Exact geometric primitives: rational points, simplices, hyperplanes,
//! vertical lines, orientation and membership predicates, vertical-line
//! intercepts, and general-position perturbation.
//!
//! All predicates are exact. Floating point appears only as a filter: every
//! point caches a nearest-`f64` image of its coordinates, signs are first
//! attempted with an error-bounded float evaluation, and the exact rational
//! path decides whenever the filter cannot.

mod hull;
mod perturb;

pub use hull::{
    certified_outside, hull_margin, point_in_hull, point_in_simplex_closed,
    point_strictly_in_simplex, HullPosition,
};
pub use perturb::{general_position_report, is_general_position, perturb_general_position};

use crate::scalar::{det_f64, det_rat, det_sign_rat, dot, dot_f64, format_rat, to_f64, Rat, Sign};
use num::Zero;
use std::fmt;

/// Errors raised by the predicate layer.
#[derive(Debug, thiserror::Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected {expected} points, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("affinely dependent tuple: {detail}")]
    Degenerate { detail: String },
    #[error("vertical supporting hyperplane: {detail}")]
    VerticalSupport { detail: String },
    #[error("empty point set where at least {needed} needed")]
    TooFew { needed: usize },
    #[error("general-position perturbation failed after {retries} attempts; {detail}")]
    PerturbationFailed { retries: u32, detail: String },
    #[error("linear program did not terminate within the pivot budget")]
    LpStalled,
}

/// A point with exact rational coordinates and a cached float image.
#[derive(Clone, Debug)]
pub struct Point {
    coords: Vec<Rat>,
    approx: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<Rat>) -> Point {
        let approx = coords.iter().map(to_f64).collect();
        Point { coords, approx }
    }

    pub fn from_i64(coords: &[i64]) -> Point {
        Point::new(coords.iter().map(|&c| crate::scalar::rat(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rat {
        &self.coords[i]
    }

    pub fn approx(&self) -> &[f64] {
        &self.approx
    }

    /// Last coordinate (the vertical axis).
    pub fn height(&self) -> &Rat {
        self.coords.last().expect("zero-dimensional point")
    }

    /// Vertical projection: the first d-1 coordinates.
    pub fn project(&self) -> Point {
        Point::new(self.coords[..self.coords.len() - 1].to_vec())
    }

    /// Projection onto the first `k` coordinates.
    pub fn project_to(&self, k: usize) -> Point {
        Point::new(self.coords[..k].to_vec())
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}
impl Eq for Point {}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Point {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}
impl std::hash::Hash for Point {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(c))?;
        }
        write!(f, ")")
    }
}

/// A k-dimensional simplex identified with its k+1 affinely independent
/// vertices, 1 <= k <= d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    /// Builds the simplex, checking affine independence of the vertices.
    pub fn new(vertices: Vec<Point>) -> Result<Simplex, GeomError> {
        if vertices.is_empty() {
            return Err(GeomError::TooFew { needed: 2 });
        }
        let d = vertices[0].dim();
        for v in &vertices {
            if v.dim() != d {
                return Err(GeomError::DimensionMismatch { expected: d, got: v.dim() });
            }
        }
        if vertices.len() < 2 || vertices.len() > d + 1 {
            return Err(GeomError::WrongCount { expected: d + 1, got: vertices.len() });
        }
        let refs: Vec<&Point> = vertices.iter().collect();
        if affine_rank(&refs) != vertices.len() - 1 {
            return Err(GeomError::Degenerate { detail: display_tuple(&refs) });
        }
        Ok(Simplex { vertices })
    }

    /// Builds without the independence check (verified input).
    pub fn new_unchecked(vertices: Vec<Point>) -> Simplex {
        Simplex { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn k(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

/// The hyperplane { x : <normal, x> = offset }, optionally carrying the
/// indices of the points it was spanned by.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    normal: Vec<Rat>,
    offset: Rat,
    witness: Option<Vec<u32>>,
    normal_f: Vec<f64>,
    offset_f: f64,
}

impl Hyperplane {
    pub fn new(normal: Vec<Rat>, offset: Rat, witness: Option<Vec<u32>>) -> Hyperplane {
        debug_assert!(normal.iter().any(|c| !c.is_zero()), "zero normal");
        let normal_f = normal.iter().map(to_f64).collect();
        let offset_f = to_f64(&offset);
        Hyperplane { normal, offset, witness, normal_f, offset_f }
    }

    /// The affine hull of `d` affinely independent points in R^d. The normal
    /// is computed by cofactor expansion, so every input point satisfies the
    /// equation exactly.
    pub fn through_points(points: &[&Point], witness: Option<Vec<u32>>) -> Result<Hyperplane, GeomError> {
        let d = points.first().map(|p| p.dim()).ok_or(GeomError::TooFew { needed: 1 })?;
        if points.len() != d {
            return Err(GeomError::WrongCount { expected: d, got: points.len() });
        }
        for p in points {
            if p.dim() != d {
                return Err(GeomError::DimensionMismatch { expected: d, got: p.dim() });
            }
        }
        // Rows are p_i - p_0 for i = 1..d-1; normal_j = (-1)^j det(minor_j).
        let rows: Vec<Vec<Rat>> = points[1..]
            .iter()
            .map(|p| {
                (0..d)
                    .map(|j| p.coord(j) - points[0].coord(j))
                    .collect()
            })
            .collect();
        let mut normal: Vec<Rat> = Vec::with_capacity(d);
        for j in 0..d {
            let minor: Vec<Vec<Rat>> = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let mut m = det_rat(&minor);
            if j % 2 == 1 {
                m = -m;
            }
            normal.push(m);
        }
        if normal.iter().all(|c| c.is_zero()) {
            return Err(GeomError::Degenerate { detail: display_tuple(points) });
        }
        let offset = dot(&normal, points[0].coords());
        Ok(Hyperplane::new(normal, offset, witness))
    }

    pub fn normal(&self) -> &[Rat] {
        &self.normal
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn witness(&self) -> Option<&[u32]> {
        self.witness.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Exact signed evaluation <normal, p> - offset.
    pub fn eval(&self, p: &Point) -> Rat {
        dot(&self.normal, p.coords()) - &self.offset
    }

    /// Sign of `eval`, float-filtered.
    pub fn side(&self, p: &Point) -> Sign {
        let (v, e) = dot_f64(&self.normal_f, p.approx());
        let value = v - self.offset_f;
        let err = e + self.offset_f.abs() * 4.0 * f64::EPSILON;
        if let Some(s) = Sign::of_f64_filtered(value, err) {
            return s;
        }
        Sign::of(&self.eval(p))
    }

    /// True when the hyperplane is parallel to the vertical axis.
    pub fn is_vertical(&self) -> bool {
        self.normal.last().expect("empty normal").is_zero()
    }

    /// Height of the hyperplane above a projected base point; requires a
    /// non-vertical hyperplane.
    pub fn height_at(&self, base: &Point) -> Rat {
        let d = self.dim();
        debug_assert_eq!(base.dim() + 1, d);
        debug_assert!(!self.is_vertical());
        let partial: Rat = (0..d - 1).map(|j| &self.normal[j] * base.coord(j)).sum();
        (&self.offset - partial) / &self.normal[d - 1]
    }
}

impl PartialEq for Hyperplane {
    /// Equality of the point sets: normals may differ by a nonzero scale.
    fn eq(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        // Cross-multiplied proportionality of (normal, offset) vectors.
        let a: Vec<&Rat> = self.normal.iter().chain(std::iter::once(&self.offset)).collect();
        let b: Vec<&Rat> = other.normal.iter().chain(std::iter::once(&other.offset)).collect();
        let pivot = match a.iter().position(|v| !v.is_zero()) {
            Some(i) => i,
            None => return false,
        };
        if b[pivot].is_zero() {
            return false;
        }
        for i in 0..a.len() {
            if a[i] * b[pivot] != b[i] * a[pivot] {
                return false;
            }
        }
        true
    }
}
impl Eq for Hyperplane {}

/// The vertical line base x R over a base point in R^{d-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalLine {
    base: Point,
}

impl VerticalLine {
    pub fn new(base: Point) -> VerticalLine {
        VerticalLine { base }
    }

    /// The line through a full-dimensional point.
    pub fn through(p: &Point) -> VerticalLine {
        VerticalLine { base: p.project() }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    /// Ambient dimension d.
    pub fn dim(&self) -> usize {
        self.base.dim() + 1
    }

    /// The point on the line at the given height.
    pub fn at_height(&self, h: Rat) -> Point {
        let mut coords = self.base.coords().to_vec();
        coords.push(h);
        Point::new(coords)
    }
}

pub(crate) fn display_tuple(points: &[&Point]) -> String {
    points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

/// Sign of the determinant of the lifted coordinate matrix of d+1 points in
/// R^d: positive/negative for the two orientations, zero iff the points are
/// affinely dependent. Exact; the float path only short-circuits certified
/// signs.
pub fn orient(points: &[&Point]) -> Result<Sign, GeomError> {
    let d = points.first().map(|p| p.dim()).ok_or(GeomError::TooFew { needed: 2 })?;
    if points.len() != d + 1 {
        return Err(GeomError::WrongCount { expected: d + 1, got: points.len() });
    }
    for p in points {
        if p.dim() != d {
            return Err(GeomError::DimensionMismatch { expected: d, got: p.dim() });
        }
    }
    let mf: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| {
            (0..d)
                .map(|j| p.approx()[j] - points[0].approx()[j])
                .collect()
        })
        .collect();
    let (value, err) = det_f64(&mf);
    if let Some(s) = Sign::of_f64_filtered(value, err) {
        return Ok(s);
    }
    let m: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| (0..d).map(|j| p.coord(j) - points[0].coord(j)).collect())
        .collect();
    Ok(det_sign_rat(&m))
}

/// Affine rank of a point tuple: the dimension of its affine hull.
pub fn affine_rank(points: &[&Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let d = points[0].dim();
    let mut rows: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| (0..d).map(|j| p.coord(j) - points[0].coord(j)).collect())
        .collect();
    // Exact row echelon.
    let mut rank = 0;
    for col in 0..d {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        rows.swap(rank, pivot);
        let head = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &head;
            for c in col..d {
                let sub = &factor * &rows[rank][c];
                rows[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Intersection of a (d-1)-simplex with a vertical line: the unique point of
/// conv(tau) on the line when the line's base lies in the projected hull
/// (boundary included), absent otherwise. The supporting hyperplane must not
/// be vertical.
pub fn simplex_line_intercept(
    tau: &Simplex,
    line: &VerticalLine,
) -> Result<Option<Point>, GeomError> {
    let d = line.dim();
    if tau.dim() != d {
        return Err(GeomError::DimensionMismatch { expected: d, got: tau.dim() });
    }
    if tau.vertices().len() != d {
        return Err(GeomError::WrongCount { expected: d, got: tau.vertices().len() });
    }
    let refs: Vec<&Point> = tau.vertices().iter().collect();
    let h = Hyperplane::through_points(&refs, None)?;
    if h.is_vertical() {
        return Err(GeomError::VerticalSupport { detail: display_tuple(&refs) });
    }
    let projected: Vec<Point> = tau.vertices().iter().map(|v| v.project()).collect();
    match point_in_hull(line.base(), &projected)? {
        HullPosition::Outside => Ok(None),
        _ => Ok(Some(line.at_height(h.height_at(line.base())))),
    }
}
