//! Hyperplane arrangements clipped to an explicit bounding box. Cells are
//! built incrementally (insert one hyperplane, split every cell it crosses)
//! with exact rational predicates; the face lattice, bottom-vertex
//! triangulation, zones, and complexity counts are derived from the cell
//! vertex sets. Random-sample cuttings with crossing certification live in
//! the `cutting` submodule.

mod cutting;

pub use cutting::{build_cutting, Cutting, CuttingCell, Slab};

use crate::geom::{point_in_hull, GeomError, Hyperplane, HullPosition, Point, Simplex};
use crate::scalar::{Rat, Sign};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArrangementError {
    #[error("degenerate hyperplanes {tuple:?}: {detail}")]
    Degenerate { tuple: Vec<u32>, detail: String },
    #[error("hyperplane {index} passes through a box-made vertex; retry with other bounds")]
    BoxClash { index: u32 },
    #[error("horizontal hyperplane {index} has no bottom vertex on its cells")]
    Horizontal { index: u32 },
    #[error("budget exceeded for {what}: needs {got}, cap {limit}")]
    Budget { what: String, limit: u128, got: u128 },
    #[error("bad arrangement input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// Axis-aligned closed box, one interval per coordinate axis.
#[derive(Clone, Debug)]
pub struct BoxBounds {
    lo: Vec<Rat>,
    hi: Vec<Rat>,
}

impl BoxBounds {
    pub fn new(lo: Vec<Rat>, hi: Vec<Rat>) -> Result<BoxBounds, ArrangementError> {
        if lo.len() != hi.len() || lo.len() < 2 {
            return Err(ArrangementError::BadInput(format!(
                "box needs matching bounds in dimension >= 2, got {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        for j in 0..lo.len() {
            if lo[j] >= hi[j] {
                return Err(ArrangementError::BadInput(format!(
                    "empty box interval on axis {j}"
                )));
            }
        }
        Ok(BoxBounds { lo, hi })
    }

    pub fn cube(lo: i64, hi: i64, d: usize) -> Result<BoxBounds, ArrangementError> {
        BoxBounds::new(
            vec![Rat::from_integer(lo.into()); d],
            vec![Rat::from_integer(hi.into()); d],
        )
    }

    /// Cube centered on the given cloud whose half-width is `factor` times
    /// the larger of 1 and the cloud's coordinate spread.
    pub fn covering<'a>(
        points: impl Iterator<Item = &'a Point>,
        d: usize,
        factor: i64,
    ) -> Result<BoxBounds, ArrangementError> {
        let mut min: Vec<Rat> = vec![Rat::zero(); d];
        let mut max: Vec<Rat> = vec![Rat::zero(); d];
        let mut any = false;
        for p in points {
            if p.dim() != d {
                return Err(ArrangementError::BadInput(format!(
                    "covering box: expected dimension {}, got {}",
                    d,
                    p.dim()
                )));
            }
            for j in 0..d {
                if !any || p.coord(j) < &min[j] {
                    min[j] = p.coord(j).clone();
                }
                if !any || p.coord(j) > &max[j] {
                    max[j] = p.coord(j).clone();
                }
            }
            any = true;
        }
        let mut spread = Rat::one();
        for j in 0..d {
            let s = &max[j] - &min[j];
            if s > spread {
                spread = s;
            }
        }
        let half = spread * Rat::from_integer(factor.into());
        let lo = (0..d)
            .map(|j| (&min[j] + &max[j]) / Rat::from_integer(2.into()) - &half)
            .collect();
        let hi = (0..d)
            .map(|j| (&min[j] + &max[j]) / Rat::from_integer(2.into()) + &half)
            .collect();
        BoxBounds::new(lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rat] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rat] {
        &self.hi
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..self.dim()).all(|j| &self.lo[j] <= p.coord(j) && p.coord(j) <= &self.hi[j])
    }

    pub fn volume(&self) -> Rat {
        (0..self.dim()).map(|j| &self.hi[j] - &self.lo[j]).product()
    }

    /// Widens every interval; asymmetric so box corners land elsewhere.
    fn widened(&self) -> BoxBounds {
        let d = self.dim();
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        for j in 0..d {
            let w = &self.hi[j] - &self.lo[j];
            lo[j] -= &w / Rat::from_integer(7.into());
            hi[j] += &w / Rat::from_integer(5.into()) + Rat::from_integer(((j as i64) + 1).into());
        }
        BoxBounds { lo, hi }
    }

    /// The 2d facet hyperplanes, low side first per axis.
    fn planes(&self) -> Vec<Hyperplane> {
        let d = self.dim();
        let mut out = Vec::with_capacity(2 * d);
        for j in 0..d {
            let mut normal = vec![Rat::zero(); d];
            normal[j] = Rat::one();
            out.push(Hyperplane::new(normal.clone(), self.lo[j].clone(), None));
            out.push(Hyperplane::new(normal, self.hi[j].clone(), None));
        }
        out
    }
}

/// A vertex of one cell: its location and the sorted ids of every
/// arrangement hyperplane (input or box) passing through it.
#[derive(Clone, Debug)]
struct CellVertex {
    point: Point,
    on: Vec<u32>,
}

/// An open convex cell, described by its closure's vertices and by the
/// hyperplanes supporting its facets together with the side the cell lies on.
#[derive(Clone, Debug)]
pub struct Cell {
    vertices: Vec<CellVertex>,
    supports: Vec<(u32, Sign)>,
    point_count: usize,
    complexity: usize,
    face_refs: Vec<Vec<usize>>,
}

impl Cell {
    pub fn vertex_points(&self) -> Vec<&Point> {
        self.vertices.iter().map(|v| &v.point).collect()
    }

    /// Facet-supporting hyperplane ids with the open cell's side of each.
    pub fn supports(&self) -> &[(u32, Sign)] {
        &self.supports
    }

    /// Number of boundary faces of dimensions 0 through d-1.
    pub fn complexity(&self) -> usize {
        self.complexity
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    /// Global face ids on this cell's boundary, one list per dimension.
    pub fn face_refs(&self) -> &[Vec<usize>] {
        &self.face_refs
    }
}

/// A face of the arrangement: the hyperplanes containing its affine hull and
/// the ids of the global vertices on its closure.
#[derive(Clone, Debug)]
pub struct Face {
    pub on: Vec<u32>,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    d: usize,
    hyperplanes: Vec<Hyperplane>,
    input_count: usize,
    bounds: BoxBounds,
    cells: Vec<Cell>,
    vertex_points: Vec<Point>,
    faces: Vec<Vec<Face>>,
    full_lattice: bool,
}

/// Result of locating a query point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Located {
    Cell(usize),
    OnHyperplane(Vec<u32>),
    OutsideBox,
}

impl Arrangement {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Input hyperplanes followed by the 2d box facet planes.
    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// True when the face lattice was built (d at most 3); above that only
    /// cells are enumerated.
    pub fn full_lattice(&self) -> bool {
        self.full_lattice
    }

    /// Faces of the given dimension; dimension d lists one face per cell.
    pub fn faces(&self, dim: usize) -> &[Face] {
        &self.faces[dim]
    }

    pub fn vertex_points(&self) -> &[Point] {
        &self.vertex_points
    }

    /// The unique open cell containing `p`, or the input hyperplanes through
    /// it, or outside-the-box.
    pub fn locate(&self, p: &Point) -> Located {
        if !self.bounds.contains(p) {
            return Located::OutsideBox;
        }
        let on: Vec<u32> = (0..self.input_count as u32)
            .filter(|&i| self.hyperplanes[i as usize].side(p) == Sign::Zero)
            .collect();
        if !on.is_empty() {
            return Located::OnHyperplane(on);
        }
        for (ci, cell) in self.cells.iter().enumerate() {
            if self.cell_admits(cell, p) {
                return Located::Cell(ci);
            }
        }
        // Points on a box facet reach here; report the facet ids.
        let on_box: Vec<u32> = (self.input_count as u32..self.hyperplanes.len() as u32)
            .filter(|&i| self.hyperplanes[i as usize].side(p) == Sign::Zero)
            .collect();
        Located::OnHyperplane(on_box)
    }

    fn cell_admits(&self, cell: &Cell, p: &Point) -> bool {
        cell.supports
            .iter()
            .all(|&(h, want)| self.hyperplanes[h as usize].side(p) == want)
    }

    /// Locates every point and fills the per-cell counts. Returns the ids
    /// of points on some input hyperplane; those belong to no open cell.
    pub fn assign_points(&mut self, points: &[Point]) -> Result<Vec<u32>, ArrangementError> {
        for cell in &mut self.cells {
            cell.point_count = 0;
        }
        let mut on_hyperplane = Vec::new();
        for (pi, p) in points.iter().enumerate() {
            match self.locate(p) {
                Located::Cell(ci) => self.cells[ci].point_count += 1,
                Located::OnHyperplane(_) => on_hyperplane.push(pi as u32),
                Located::OutsideBox => {
                    return Err(ArrangementError::BadInput(format!(
                        "point {pi} lies outside the box"
                    )))
                }
            }
        }
        Ok(on_hyperplane)
    }
}

/// Sum of per-cell boundary face counts over the given cells.
pub fn many_cells_complexity(a: &Arrangement, cells: &[usize]) -> usize {
    cells.iter().map(|&ci| a.cells[ci].complexity()).sum()
}

/// Incremental construction: the box starts as one cell and every input
/// hyperplane splits the cells it crosses. Inputs must be in general
/// position: distinct, pairwise non-parallel, no d+1 through a common point,
/// and in d=3 no three sharing a line; violations report the offending ids.
pub fn build_arrangement(
    input: &[Hyperplane],
    bounds: &BoxBounds,
) -> Result<Arrangement, ArrangementError> {
    let d = bounds.dim();
    for (i, h) in input.iter().enumerate() {
        if h.dim() != d {
            return Err(ArrangementError::BadInput(format!(
                "hyperplane {} has dimension {}, box has {}",
                i,
                h.dim(),
                d
            )));
        }
    }
    check_pairwise(input)?;

    let mut hyperplanes: Vec<Hyperplane> = input.to_vec();
    hyperplanes.extend(bounds.planes());
    let input_count = input.len();

    let mut cells = vec![box_cell(bounds, input_count)];
    for idx in 0..input_count {
        let mut next: Vec<Cell> = Vec::new();
        for cell in &cells {
            split_cell(cell, idx, &hyperplanes, input_count, d, &mut next)?;
        }
        cells = next;
    }

    let mut arr = Arrangement {
        d,
        hyperplanes,
        input_count,
        bounds: bounds.clone(),
        cells,
        vertex_points: Vec::new(),
        faces: vec![Vec::new(); d + 1],
        full_lattice: d <= 3,
    };
    build_lattice(&mut arr);
    Ok(arr)
}

/// Pairwise distinctness and non-parallelism of the input hyperplanes.
fn check_pairwise(input: &[Hyperplane]) -> Result<(), ArrangementError> {
    for i in 0..input.len() {
        for j in i + 1..input.len() {
            if !proportional(input[i].normal(), input[j].normal()) {
                continue;
            }
            let detail = if input[i] == input[j] {
                "coincident hyperplanes"
            } else {
                "parallel hyperplanes"
            };
            return Err(ArrangementError::Degenerate {
                tuple: vec![i as u32, j as u32],
                detail: detail.into(),
            });
        }
    }
    Ok(())
}

fn proportional(a: &[Rat], b: &[Rat]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

/// The whole box as a single cell: 2^d corner vertices, 2d supports.
fn box_cell(bounds: &BoxBounds, input_count: usize) -> Cell {
    let d = bounds.dim();
    let mut vertices = Vec::with_capacity(1 << d);
    for mask in 0u32..(1 << d) {
        let mut coords = Vec::with_capacity(d);
        let mut on = Vec::with_capacity(d);
        for j in 0..d {
            let high = mask & (1 << j) != 0;
            coords.push(if high { bounds.hi[j].clone() } else { bounds.lo[j].clone() });
            on.push((input_count + 2 * j + usize::from(high)) as u32);
        }
        on.sort_unstable();
        vertices.push(CellVertex { point: Point::new(coords), on });
    }
    let supports = (0..d)
        .flat_map(|j| {
            [
                ((input_count + 2 * j) as u32, Sign::Pos),
                ((input_count + 2 * j + 1) as u32, Sign::Neg),
            ]
        })
        .collect();
    Cell {
        vertices,
        supports,
        point_count: 0,
        complexity: 0,
        face_refs: Vec::new(),
    }
}

/// Pushes `cell` unchanged, or the two halves the hyperplane cuts it into.
fn split_cell(
    cell: &Cell,
    idx: usize,
    hyperplanes: &[Hyperplane],
    input_count: usize,
    d: usize,
    out: &mut Vec<Cell>,
) -> Result<(), ArrangementError> {
    let hp = &hyperplanes[idx];
    let mut signs = Vec::with_capacity(cell.vertices.len());
    for v in &cell.vertices {
        let s = hp.side(&v.point);
        if s == Sign::Zero {
            return Err(classify_vertex_hit(v, idx, hyperplanes, input_count, d));
        }
        signs.push(s);
    }
    let has_pos = signs.iter().any(|&s| s == Sign::Pos);
    let has_neg = signs.iter().any(|&s| s == Sign::Neg);
    if !(has_pos && has_neg) {
        out.push(cell.clone());
        return Ok(());
    }

    // New vertices appear where edges (vertex pairs sharing d-1 hyperplanes)
    // cross the cutter.
    let mut crossings: Vec<CellVertex> = Vec::new();
    for i in 0..cell.vertices.len() {
        for j in i + 1..cell.vertices.len() {
            if signs[i] == signs[j] {
                continue;
            }
            let shared = shared_ids(&cell.vertices[i].on, &cell.vertices[j].on);
            if shared.len() < d - 1 {
                continue;
            }
            let a = &cell.vertices[i].point;
            let b = &cell.vertices[j].point;
            let ea = hp.eval(a);
            let eb = hp.eval(b);
            let t = &ea / (&ea - &eb);
            let coords = (0..d)
                .map(|k| a.coord(k) + &t * &(b.coord(k) - a.coord(k)))
                .collect();
            let mut on = shared;
            on.push(idx as u32);
            on.sort_unstable();
            crossings.push(CellVertex { point: Point::new(coords), on });
        }
    }

    for keep in [Sign::Pos, Sign::Neg] {
        let mut vertices: Vec<CellVertex> = cell
            .vertices
            .iter()
            .zip(&signs)
            .filter(|&(_, &s)| s == keep)
            .map(|(v, _)| v.clone())
            .collect();
        vertices.extend(crossings.iter().cloned());
        let supports = recompute_supports(&vertices, hyperplanes, d);
        out.push(Cell {
            vertices,
            supports,
            point_count: 0,
            complexity: 0,
            face_refs: Vec::new(),
        });
    }
    Ok(())
}

/// The cutter passes through an existing vertex: either a true input
/// degeneracy (reported with the offending ids) or a coincidence with a
/// box-made vertex that a different box removes.
fn classify_vertex_hit(
    v: &CellVertex,
    idx: usize,
    hyperplanes: &[Hyperplane],
    input_count: usize,
    d: usize,
) -> ArrangementError {
    let inputs_on: Vec<u32> = v
        .on
        .iter()
        .copied()
        .filter(|&i| (i as usize) < input_count)
        .collect();
    if inputs_on.len() >= d {
        let mut tuple = inputs_on;
        tuple.truncate(d);
        tuple.push(idx as u32);
        return ArrangementError::Degenerate {
            tuple,
            detail: format!("{} hyperplanes meet at a point", d + 1),
        };
    }
    if inputs_on.len() == d - 1 {
        // The d-1 hyperplanes meet in a line; containing it is degenerate,
        // merely crossing it at this box-clipped point is not.
        let normals: Vec<&[Rat]> = inputs_on
            .iter()
            .map(|&i| hyperplanes[i as usize].normal())
            .collect();
        if let Some(dir) = common_line_direction(&normals, d) {
            let along: Rat = (0..d)
                .map(|k| &hyperplanes[idx].normal()[k] * &dir[k])
                .sum();
            if along.is_zero() {
                let mut tuple = inputs_on;
                tuple.push(idx as u32);
                return ArrangementError::Degenerate {
                    tuple,
                    detail: format!("{d} hyperplanes share a line"),
                };
            }
        }
    }
    ArrangementError::BoxClash { index: idx as u32 }
}

/// Direction of the line common to d-1 independent hyperplanes in R^d:
/// a nonzero kernel vector of their normal matrix, by Gaussian elimination.
fn common_line_direction(normals: &[&[Rat]], d: usize) -> Option<Vec<Rat>> {
    let rows = normals.len();
    let mut m: Vec<Vec<Rat>> = normals.iter().map(|n| n.to_vec()).collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..d {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let head = m[r][c].clone();
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &head;
            for k in c..d {
                let sub = &f * &m[r][k];
                m[i][k] -= sub;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if r < rows {
        return None;
    }
    let free = (0..d).find(|c| !pivot_cols.contains(c))?;
    let mut dir = vec![Rat::zero(); d];
    dir[free] = Rat::one();
    for (row, &pc) in pivot_cols.iter().enumerate().rev() {
        let mut acc = Rat::zero();
        for c in pc + 1..d {
            acc += &m[row][c] * &dir[c];
        }
        dir[pc] = -acc / &m[row][pc];
    }
    Some(dir)
}

fn shared_ids(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// A hyperplane supports a facet exactly when at least d cell vertices lie
/// on it; the cell's side is read off any vertex strictly off it.
fn recompute_supports(
    vertices: &[CellVertex],
    hyperplanes: &[Hyperplane],
    d: usize,
) -> Vec<(u32, Sign)> {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for v in vertices {
        for &h in &v.on {
            *counts.entry(h).or_insert(0) += 1;
        }
    }
    let mut supports = Vec::new();
    for (&h, &cnt) in &counts {
        if cnt < d {
            continue;
        }
        let side = vertices
            .iter()
            .find(|v| v.on.binary_search(&h).is_err())
            .map(|v| hyperplanes[h as usize].side(&v.point))
            .unwrap_or(Sign::Zero);
        if side != Sign::Zero {
            supports.push((h, side));
        }
    }
    supports
}

/// Global faces by dimension plus per-cell references and complexity.
fn build_lattice(arr: &mut Arrangement) {
    let d = arr.d;
    let mut vertex_ids: BTreeMap<Point, usize> = BTreeMap::new();
    let mut vertex_faces: Vec<Face> = Vec::new();
    let mut cell_vertex_ids: Vec<Vec<usize>> = Vec::new();
    for cell in &arr.cells {
        let mut ids = Vec::with_capacity(cell.vertices.len());
        for v in &cell.vertices {
            let next = vertex_ids.len();
            let id = *vertex_ids.entry(v.point.clone()).or_insert(next);
            if id == vertex_faces.len() {
                vertex_faces.push(Face { on: v.on.clone(), vertices: vec![id] });
                arr.vertex_points.push(v.point.clone());
            }
            ids.push(id);
        }
        cell_vertex_ids.push(ids);
    }
    arr.faces[0] = vertex_faces;

    if !arr.full_lattice {
        for (ci, cell) in arr.cells.iter_mut().enumerate() {
            cell.face_refs = vec![cell_vertex_ids[ci].clone()];
            cell.complexity = cell.vertices.len();
        }
        arr.faces[d] = arr
            .cells
            .iter()
            .zip(&cell_vertex_ids)
            .map(|(_, ids)| Face { on: Vec::new(), vertices: ids.clone() })
            .collect();
        return;
    }

    let mut edge_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut edge_faces: Vec<Face> = Vec::new();
    let mut facet_ids: BTreeMap<(u32, Vec<usize>), usize> = BTreeMap::new();
    let mut facet_faces: Vec<Face> = Vec::new();
    let mut refs_per_cell: Vec<Vec<Vec<usize>>> = Vec::with_capacity(arr.cells.len());

    for (ci, cell) in arr.cells.iter().enumerate() {
        let ids = &cell_vertex_ids[ci];
        let mut refs: Vec<Vec<usize>> = vec![ids.clone()];

        let mut edges: Vec<usize> = Vec::new();
        for i in 0..cell.vertices.len() {
            for j in i + 1..cell.vertices.len() {
                let shared = shared_ids(&cell.vertices[i].on, &cell.vertices[j].on);
                if shared.len() < d - 1 {
                    continue;
                }
                let key = (ids[i].min(ids[j]), ids[i].max(ids[j]));
                let next = edge_faces.len();
                let eid = *edge_ids.entry(key).or_insert(next);
                if eid == edge_faces.len() {
                    edge_faces.push(Face { on: shared, vertices: vec![key.0, key.1] });
                }
                edges.push(eid);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        refs.push(edges);

        if d == 3 {
            let mut facets: Vec<usize> = Vec::new();
            for &(h, _) in &cell.supports {
                let mut members: Vec<usize> = cell
                    .vertices
                    .iter()
                    .zip(ids)
                    .filter(|(v, _)| v.on.binary_search(&h).is_ok())
                    .map(|(_, &id)| id)
                    .collect();
                members.sort_unstable();
                let next = facet_faces.len();
                let fid = *facet_ids.entry((h, members.clone())).or_insert(next);
                if fid == facet_faces.len() {
                    facet_faces.push(Face { on: vec![h], vertices: members });
                }
                facets.push(fid);
            }
            facets.sort_unstable();
            refs.push(facets);
        }

        refs_per_cell.push(refs);
    }

    arr.faces[1] = edge_faces;
    if d == 3 {
        arr.faces[2] = facet_faces;
    }
    arr.faces[d] = arr
        .cells
        .iter()
        .zip(&cell_vertex_ids)
        .map(|(_, ids)| Face { on: Vec::new(), vertices: ids.clone() })
        .collect();

    for (cell, refs) in arr.cells.iter_mut().zip(refs_per_cell) {
        cell.complexity = refs.iter().map(Vec::len).sum();
        cell.face_refs = refs;
    }
}

/// One closed d-simplex of a triangulated cell.
#[derive(Clone, Debug)]
pub struct SimplicialCell {
    pub cell: usize,
    pub simplex: Simplex,
}

/// Triangulates every cell by coning its lowest vertex over the fan
/// triangulations of the boundary faces avoiding it. Ties on the lowest
/// coordinate break lexicographically, so the output is canonical. Input
/// hyperplanes must not be horizontal; the box floor and ceiling are exempt
/// because cells keep a unique tie-broken bottom vertex regardless.
pub fn bottom_vertex_triangulate(
    arr: &Arrangement,
) -> Result<Vec<SimplicialCell>, ArrangementError> {
    let d = arr.d;
    if d != 2 && d != 3 {
        return Err(ArrangementError::BadInput(format!(
            "triangulation supports dimensions 2 and 3, got {d}"
        )));
    }
    for i in 0..arr.input_count {
        let n = arr.hyperplanes[i].normal();
        if n[..d - 1].iter().all(Zero::is_zero) {
            return Err(ArrangementError::Horizontal { index: i as u32 });
        }
    }

    let mut out = Vec::new();
    for (ci, cell) in arr.cells.iter().enumerate() {
        if d == 2 {
            triangulate_polygon(ci, cell, &mut out)?;
        } else {
            triangulate_polytope(ci, cell, &mut out)?;
        }
    }
    Ok(out)
}

/// Height-then-lexicographic order; the minimum is the bottom vertex.
fn bottom_key(p: &Point) -> (Rat, Vec<Rat>) {
    (p.coord(p.dim() - 1).clone(), p.coords().to_vec())
}

fn triangulate_polygon(
    ci: usize,
    cell: &Cell,
    out: &mut Vec<SimplicialCell>,
) -> Result<(), ArrangementError> {
    let pts: Vec<&Point> = cell.vertices.iter().map(|v| &v.point).collect();
    let ring = polygon_ring(&pts, &[0, 1]);
    let bottom = (0..ring.len())
        .min_by_key(|&i| bottom_key(pts[ring[i]]))
        .expect("cell has vertices");
    let k = ring.len();
    for step in 1..k - 1 {
        let a = ring[(bottom + step) % k];
        let b = ring[(bottom + step + 1) % k];
        let simplex = Simplex::new(vec![
            pts[ring[bottom]].clone(),
            pts[a].clone(),
            pts[b].clone(),
        ])?;
        out.push(SimplicialCell { cell: ci, simplex });
    }
    Ok(())
}

fn triangulate_polytope(
    ci: usize,
    cell: &Cell,
    out: &mut Vec<SimplicialCell>,
) -> Result<(), ArrangementError> {
    let apex_idx = (0..cell.vertices.len())
        .min_by_key(|&i| bottom_key(&cell.vertices[i].point))
        .expect("cell has vertices");
    let apex = &cell.vertices[apex_idx];
    for &(h, _) in &cell.supports {
        if apex.on.binary_search(&h).is_ok() {
            continue;
        }
        let face: Vec<&Point> = cell
            .vertices
            .iter()
            .filter(|v| v.on.binary_search(&h).is_ok())
            .map(|v| &v.point)
            .collect();
        debug_assert!(face.len() >= 3);
        let drop_axis = face_drop_axis(&face);
        let keep: Vec<usize> = (0..3).filter(|&j| j != drop_axis).collect();
        let ring = polygon_ring(&face, &keep);
        let bottom = (0..ring.len())
            .min_by_key(|&i| bottom_key(face[ring[i]]))
            .expect("face has vertices");
        let k = ring.len();
        for step in 1..k - 1 {
            let a = ring[(bottom + step) % k];
            let b = ring[(bottom + step + 1) % k];
            let simplex = Simplex::new(vec![
                apex.point.clone(),
                face[ring[bottom]].clone(),
                face[a].clone(),
                face[b].clone(),
            ])?;
            out.push(SimplicialCell { cell: ci, simplex });
        }
    }
    Ok(())
}

/// Axis to drop when projecting a planar face to 2 coordinates: one where
/// the face's spanning vectors stay independent after dropping it.
fn face_drop_axis(face: &[&Point]) -> usize {
    let a = face[0];
    for drop in 0..3 {
        let keep: Vec<usize> = (0..3).filter(|&j| j != drop).collect();
        for b in &face[1..] {
            for c in &face[1..] {
                let ux = b.coord(keep[0]) - a.coord(keep[0]);
                let uy = b.coord(keep[1]) - a.coord(keep[1]);
                let vx = c.coord(keep[0]) - a.coord(keep[0]);
                let vy = c.coord(keep[1]) - a.coord(keep[1]);
                if &ux * &vy != &uy * &vx {
                    return drop;
                }
            }
        }
    }
    2
}

/// Indices of `pts` in cyclic order around their centroid, using the two
/// coordinates listed in `keep`.
fn polygon_ring(pts: &[&Point], keep: &[usize]) -> Vec<usize> {
    let n = Rat::from_integer((pts.len() as i64).into());
    let cx: Rat = pts.iter().map(|p| p.coord(keep[0])).sum::<Rat>() / &n;
    let cy: Rat = pts.iter().map(|p| p.coord(keep[1])).sum::<Rat>() / &n;
    let rel: Vec<(Rat, Rat)> = pts
        .iter()
        .map(|p| (p.coord(keep[0]) - &cx, p.coord(keep[1]) - &cy))
        .collect();
    let half = |v: &(Rat, Rat)| -> u8 {
        if v.1.is_positive() || (v.1.is_zero() && v.0.is_positive()) {
            0
        } else {
            1
        }
    };
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| {
        let (hi, hj) = (half(&rel[i]), half(&rel[j]));
        if hi != hj {
            return hi.cmp(&hj);
        }
        let cross = &rel[i].0 * &rel[j].1 - &rel[i].1 * &rel[j].0;
        if cross.is_positive() {
            std::cmp::Ordering::Less
        } else if cross.is_negative() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    order
}

/// Query shape for `zone_of`: a hyperplane, or a polytope given by points
/// whose hull boundary is the queried surface.
pub enum ZoneQuery<'a> {
    Hyperplane(&'a Hyperplane),
    Polytope(&'a [Point]),
}

/// Cells whose closure meets the query surface.
pub fn zone_of(q: &ZoneQuery, arr: &Arrangement) -> Result<Vec<usize>, ArrangementError> {
    let d = arr.d;
    let mut zone = Vec::new();
    match q {
        ZoneQuery::Hyperplane(h) => {
            if h.dim() != d {
                return Err(ArrangementError::BadInput(format!(
                    "zone query dimension {} in a {}-dimensional arrangement",
                    h.dim(),
                    d
                )));
            }
            for (ci, cell) in arr.cells.iter().enumerate() {
                let mut has_nonneg = false;
                let mut has_nonpos = false;
                for v in &cell.vertices {
                    match h.side(&v.point) {
                        Sign::Pos => has_nonneg = true,
                        Sign::Neg => has_nonpos = true,
                        Sign::Zero => {
                            has_nonneg = true;
                            has_nonpos = true;
                        }
                    }
                    if has_nonneg && has_nonpos {
                        break;
                    }
                }
                if has_nonneg && has_nonpos {
                    zone.push(ci);
                }
            }
        }
        ZoneQuery::Polytope(body) => {
            if body.is_empty() {
                return Err(ArrangementError::BadInput("empty zone polytope".into()));
            }
            if body.iter().any(|p| p.dim() != d) {
                return Err(ArrangementError::BadInput(
                    "zone polytope dimension mismatch".into(),
                ));
            }
            let origin = Point::new(vec![Rat::zero(); d]);
            for (ci, cell) in arr.cells.iter().enumerate() {
                // Closure meets the body iff 0 is in the hull of pairwise
                // differences; it leaves the interior iff some cell vertex
                // is not strictly inside.
                let diffs: Vec<Point> = cell
                    .vertices
                    .iter()
                    .flat_map(|v| {
                        body.iter().map(move |w| {
                            Point::new(
                                (0..d).map(|k| v.point.coord(k) - w.coord(k)).collect(),
                            )
                        })
                    })
                    .collect();
                if point_in_hull(&origin, &diffs)? == HullPosition::Outside {
                    continue;
                }
                let mut escapes = false;
                for v in &cell.vertices {
                    if point_in_hull(&v.point, body)? != HullPosition::Interior {
                        escapes = true;
                        break;
                    }
                }
                if escapes {
                    zone.push(ci);
                }
            }
        }
    }
    Ok(zone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num::{Signed, Zero};
    use std::collections::BTreeSet;

    fn line(nx: i64, ny: i64, off: i64) -> Hyperplane {
        Hyperplane::new(vec![rat(nx), rat(ny)], rat(off), None)
    }

    fn plane(nx: i64, ny: i64, nz: i64, off: i64) -> Hyperplane {
        Hyperplane::new(vec![rat(nx), rat(ny), rat(nz)], rat(off), None)
    }

    /// Three pairwise-crossing lines with distinct crossing points at
    /// (0,0), (0,2), and (4/3, 2/3); none passes through a cube corner.
    fn three_lines() -> Vec<Hyperplane> {
        vec![line(1, 0, 0), line(1, -2, 0), line(1, 1, 2)]
    }

    fn shoelace(pts: &[&Point], ring: &[usize]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..ring.len() {
            let a = pts[ring[i]];
            let b = pts[ring[(i + 1) % ring.len()]];
            acc += a.coord(0) * b.coord(1) - b.coord(0) * a.coord(1);
        }
        let two = Rat::from_integer(2.into());
        let half = acc / two;
        if half.is_negative() {
            -half
        } else {
            half
        }
    }

    fn simplex_volume(s: &Simplex) -> Rat {
        let d = s.dim();
        let rows: Vec<Vec<Rat>> = s.vertices()[1..]
            .iter()
            .map(|p| (0..d).map(|j| p.coord(j) - s.vertices()[0].coord(j)).collect())
            .collect();
        let det = crate::scalar::det_rat(&rows);
        let fact: i64 = (1..=d as i64).product();
        let v = det / Rat::from_integer(fact.into());
        if v.is_negative() {
            -v
        } else {
            v
        }
    }

    #[test]
    fn empty_input_keeps_one_cell() {
        let b = BoxBounds::cube(-1, 1, 2).unwrap();
        let arr = build_arrangement(&[], &b).unwrap();
        assert_eq!(arr.cells().len(), 1);
        assert_eq!(arr.faces(0).len(), 4);
        assert_eq!(arr.cells()[0].complexity(), 8);
        let zone = zone_of(&ZoneQuery::Hyperplane(&line(1, 0, 0)), &arr).unwrap();
        assert_eq!(zone, vec![0]);
    }

    #[test]
    fn three_generic_lines_make_seven_cells() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let arr = build_arrangement(&three_lines(), &b).unwrap();
        assert_eq!(arr.cells().len(), 7);
    }

    #[test]
    fn region_counts_follow_the_quadratic_formula() {
        // Distinct slopes forbid parallels; offsets 7^i make the pairwise
        // crossing heights (7^i - 7^j) / (j - i) pairwise distinct, so no
        // three lines are concurrent. The box contains every crossing.
        let b = BoxBounds::cube(-20_000, 20_000, 2).unwrap();
        for n in 1..=5usize {
            let lines: Vec<Hyperplane> = (0..n)
                .map(|i| line(1, -(2 + i as i64), 7i64.pow(i as u32)))
                .collect();
            let arr = build_arrangement(&lines, &b).unwrap();
            assert_eq!(arr.cells().len(), 1 + n + n * (n - 1) / 2, "n = {n}");
        }
    }

    #[test]
    fn three_generic_planes_make_eight_cells() {
        let b = BoxBounds::cube(-9, 9, 3).unwrap();
        let planes = vec![plane(1, 0, 0, 0), plane(0, 1, 0, 0), plane(1, 1, 1, 1)];
        let arr = build_arrangement(&planes, &b).unwrap();
        assert_eq!(arr.cells().len(), 8);
    }

    #[test]
    fn concurrent_lines_report_the_tuple() {
        // Asymmetric box so x + y = 0 misses every corner.
        let b = BoxBounds::cube(-5, 7, 2).unwrap();
        let err = build_arrangement(
            &[line(1, 0, 0), line(0, 1, 0), line(1, 1, 0)],
            &b,
        )
        .unwrap_err();
        match err {
            ArrangementError::Degenerate { tuple, .. } => assert_eq!(tuple, vec![0, 1, 2]),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn parallel_and_duplicate_inputs_are_rejected() {
        let b = BoxBounds::cube(-5, 5, 2).unwrap();
        let parallel = build_arrangement(&[line(1, 1, 0), line(2, 2, 1)], &b).unwrap_err();
        assert!(matches!(parallel, ArrangementError::Degenerate { .. }));
        let dup = build_arrangement(&[line(1, 1, 0), line(2, 2, 0)], &b).unwrap_err();
        assert!(matches!(dup, ArrangementError::Degenerate { .. }));
    }

    #[test]
    fn planes_sharing_a_line_are_rejected() {
        // Asymmetric box so x + y = 0 misses every corner.
        let b = BoxBounds::cube(-5, 7, 3).unwrap();
        // All three contain the line x = y = 0.
        let err = build_arrangement(
            &[plane(1, 0, 0, 0), plane(0, 1, 0, 0), plane(1, 1, 0, 0)],
            &b,
        )
        .unwrap_err();
        match err {
            ArrangementError::Degenerate { tuple, detail } => {
                assert_eq!(tuple, vec![0, 1, 2]);
                assert!(detail.contains("share a line"), "{detail}");
            }
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn locate_finds_exactly_one_cell() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let arr = build_arrangement(&three_lines(), &b).unwrap();
        let probes = [
            Point::from_i64(&[3, 1]),
            Point::from_i64(&[-3, 1]),
            Point::from_i64(&[0, 0]),
            Point::new(vec![rat(1) / rat(3), rat(1)]),
        ];
        for p in &probes {
            match arr.locate(p) {
                Located::Cell(ci) => {
                    let admitted = (0..arr.cells().len())
                        .filter(|&i| arr.cell_admits(&arr.cells()[i], p))
                        .count();
                    assert_eq!(admitted, 1);
                    assert!(ci < arr.cells().len());
                }
                Located::OnHyperplane(on) => {
                    assert!(!on.is_empty());
                }
                Located::OutsideBox => panic!("probe inside the box"),
            }
        }
        assert_eq!(arr.locate(&Point::from_i64(&[99, 99])), Located::OutsideBox);
    }

    #[test]
    fn point_assignment_partitions_the_input() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let mut arr = build_arrangement(&three_lines(), &b).unwrap();
        let points = vec![
            Point::from_i64(&[3, 1]),
            Point::from_i64(&[-3, 1]),
            Point::from_i64(&[0, 5]),
            Point::new(vec![rat(4) / rat(9), rat(8) / rat(9)]),
            Point::from_i64(&[-7, -7]),
        ];
        let on = arr.assign_points(&points).unwrap();
        // The third point sits on the line x = 0.
        assert_eq!(on, vec![2]);
        let total: usize = arr.cells().iter().map(Cell::point_count).sum();
        assert_eq!(total, points.len() - on.len());
        assert!(arr
            .assign_points(&[Point::from_i64(&[99, 99])])
            .is_err());
    }

    #[test]
    fn triangle_cell_yields_one_simplex_and_quads_two() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let arr = build_arrangement(&three_lines(), &b).unwrap();
        let simplices = bottom_vertex_triangulate(&arr).unwrap();
        // The central cell bounded by all three lines is a triangle; the
        // probe is the centroid of its corners.
        let inner = Point::new(vec![rat(4) / rat(9), rat(8) / rat(9)]);
        let Located::Cell(tri_cell) = arr.locate(&inner) else {
            panic!("probe on a hyperplane");
        };
        let tri_count = simplices.iter().filter(|s| s.cell == tri_cell).count();
        assert_eq!(tri_count, 1);
        // Every cell fans into vertex-count minus two triangles.
        for (ci, cell) in arr.cells().iter().enumerate() {
            let count = simplices.iter().filter(|s| s.cell == ci).count();
            assert_eq!(count, cell.vertices.len() - 2, "cell {ci}");
        }
    }

    #[test]
    fn triangulation_areas_cover_the_box_exactly() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let arr = build_arrangement(&three_lines(), &b).unwrap();
        let simplices = bottom_vertex_triangulate(&arr).unwrap();
        let total: Rat = simplices.iter().map(|s| simplex_volume(&s.simplex)).sum();
        assert_eq!(total, b.volume());
        // Per-cell, fan areas agree with the shoelace area of the polygon.
        for (ci, cell) in arr.cells().iter().enumerate() {
            let pts = cell.vertex_points();
            let ring = polygon_ring(&pts, &[0, 1]);
            let direct = shoelace(&pts, &ring);
            let fanned: Rat = simplices
                .iter()
                .filter(|s| s.cell == ci)
                .map(|s| simplex_volume(&s.simplex))
                .sum();
            assert_eq!(fanned, direct, "cell {ci}");
        }
    }

    #[test]
    fn tetrahedral_volumes_cover_the_box_exactly() {
        let b = BoxBounds::cube(-9, 10, 3).unwrap();
        let planes = vec![plane(1, 2, 1, 0), plane(2, -1, 1, 3)];
        let arr = build_arrangement(&planes, &b).unwrap();
        let simplices = bottom_vertex_triangulate(&arr).unwrap();
        let total: Rat = simplices.iter().map(|s| simplex_volume(&s.simplex)).sum();
        assert_eq!(total, b.volume());
    }

    #[test]
    fn horizontal_input_is_rejected_for_triangulation() {
        let b = BoxBounds::cube(-5, 5, 2).unwrap();
        let arr = build_arrangement(&[line(0, 1, 1)], &b).unwrap();
        match bottom_vertex_triangulate(&arr) {
            Err(ArrangementError::Horizontal { index }) => assert_eq!(index, 0),
            other => panic!("expected horizontal rejection, got {other:?}"),
        }
    }

    #[test]
    fn zone_of_query_line_matches_segment_walk() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let arr = build_arrangement(&three_lines(), &b).unwrap();
        // Query line y = 1/3 crosses all three input lines inside the box at
        // distinct points, cutting the box into 4 open segments.
        let q = Hyperplane::new(vec![rat(0), rat(1)], rat(1) / rat(3), None);
        let zone = zone_of(&ZoneQuery::Hyperplane(&q), &arr).unwrap();
        assert_eq!(zone.len(), 4);
        // Independent walk: midpoints of consecutive crossings each land in
        // one zone cell.
        // Crossing abscissas: with x = 0 at 0, with x = 2y at 2/3, with
        // x + y = 2 at 5/3.
        let y = rat(1) / rat(3);
        let mut xs = vec![rat(-10), rat(10)];
        xs.push(rat(0));
        xs.push(rat(2) / rat(3));
        xs.push(rat(5) / rat(3));
        xs.sort();
        let mut walked = BTreeSet::new();
        for w in xs.windows(2) {
            let mid = Point::new(vec![(&w[0] + &w[1]) / rat(2), y.clone()]);
            match arr.locate(&mid) {
                Located::Cell(ci) => {
                    walked.insert(ci);
                }
                other => panic!("midpoint not interior: {other:?}"),
            }
        }
        let mut zone_sorted = zone.clone();
        zone_sorted.sort_unstable();
        assert_eq!(zone_sorted, walked.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn zone_of_member_hyperplane_lists_adjacent_cells() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let arr = build_arrangement(&three_lines(), &b).unwrap();
        let zone = zone_of(&ZoneQuery::Hyperplane(&arr.hyperplanes()[0].clone()), &arr).unwrap();
        for ci in &zone {
            let touches = arr.cells()[*ci]
                .vertices
                .iter()
                .any(|v| v.on.binary_search(&0).is_ok());
            assert!(touches, "cell {ci} in the zone but not adjacent");
        }
        // Every cell with a vertex on the line is in the zone.
        for (ci, cell) in arr.cells().iter().enumerate() {
            let touches = cell.vertices.iter().any(|v| v.on.binary_search(&0).is_ok());
            assert_eq!(touches, zone.contains(&ci), "cell {ci}");
        }
    }

    #[test]
    fn zone_of_polytope_boundary() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let arr = build_arrangement(&three_lines(), &b).unwrap();
        // A tiny square strictly inside one cell: its boundary meets only
        // that cell.
        let small = vec![
            Point::from_i64(&[5, 1]),
            Point::from_i64(&[6, 1]),
            Point::from_i64(&[6, 2]),
            Point::from_i64(&[5, 2]),
        ];
        let zone = zone_of(&ZoneQuery::Polytope(&small), &arr).unwrap();
        assert_eq!(zone.len(), 1);
        let Located::Cell(home) = arr.locate(&Point::new(vec![
            rat(11) / rat(2),
            rat(3) / rat(2),
        ])) else {
            panic!("probe on boundary");
        };
        assert_eq!(zone, vec![home]);
        // A polytope spanning the whole box boundary-crosses every cell
        // except those buried strictly inside it; with this size none are.
        let big = vec![
            Point::from_i64(&[-9, -9]),
            Point::from_i64(&[9, -9]),
            Point::from_i64(&[9, 9]),
            Point::from_i64(&[-9, 9]),
        ];
        let zone_big = zone_of(&ZoneQuery::Polytope(&big), &arr).unwrap();
        assert!(zone_big.len() >= 6, "boundary crosses most cells");
    }

    #[test]
    fn complexity_matches_the_face_incidence_identity() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let arr = build_arrangement(&three_lines(), &b).unwrap();
        // Sum of per-cell complexities equals each low-dimensional face
        // counted once per incident cell.
        let all: Vec<usize> = (0..arr.cells().len()).collect();
        let total = many_cells_complexity(&arr, &all);
        let mut incidences = 0usize;
        for dim in 0..2 {
            for face in arr.faces(dim) {
                let on_cells = arr
                    .cells()
                    .iter()
                    .filter(|cell| {
                        face.vertices.iter().all(|&vid| {
                            cell.vertices
                                .iter()
                                .any(|v| v.point == arr.vertex_points[vid])
                            })
                    })
                    .count();
                incidences += on_cells;
            }
        }
        assert_eq!(total, incidences);
        // A triangle cell counts 3 vertices + 3 edges.
        let inner = Point::new(vec![rat(4) / rat(9), rat(8) / rat(9)]);
        let Located::Cell(tri_cell) = arr.locate(&inner) else {
            panic!("probe on a hyperplane");
        };
        assert_eq!(arr.cells()[tri_cell].complexity(), 6);
        assert_eq!(many_cells_complexity(&arr, &[]), 0);
    }

    #[test]
    fn zone_size_stays_inside_the_linear_envelope() {
        // 8 generic lines (offsets 2^i keep crossing heights pairwise
        // distinct); the zone of a generic query stays within 6n.
        let b = BoxBounds::cube(-5_000, 5_000, 2).unwrap();
        let lines: Vec<Hyperplane> = (0..8)
            .map(|i| line(1, -(2 + i as i64), 1i64 << i))
            .collect();
        let arr = build_arrangement(&lines, &b).unwrap();
        let q = line(3, 1, 1);
        let zone = zone_of(&ZoneQuery::Hyperplane(&q), &arr).unwrap();
        assert!(zone.len() <= 6 * 8, "zone {} too large", zone.len());
        assert!(!zone.is_empty());
    }

    #[test]
    fn faces_cover_every_dimension_in_3d() {
        let b = BoxBounds::cube(-9, 10, 3).unwrap();
        let planes = vec![plane(1, 2, 1, 0), plane(2, -1, 1, 3)];
        let arr = build_arrangement(&planes, &b).unwrap();
        assert!(arr.full_lattice());
        assert_eq!(arr.cells().len(), 4);
        assert_eq!(arr.faces(3).len(), 4);
        assert!(!arr.faces(0).is_empty());
        assert!(!arr.faces(1).is_empty());
        assert!(!arr.faces(2).is_empty());
        for cell in arr.cells() {
            // A bounded 3-polytope has at least 4 of each low-dim face.
            assert!(cell.complexity() >= 12);
            assert_eq!(cell.face_refs().len(), 3);
        }
    }

    #[test]
    fn vertex_dedup_spans_cells() {
        let b = BoxBounds::cube(-10, 10, 2).unwrap();
        let arr = build_arrangement(&three_lines(), &b).unwrap();
        // 4 corners + 3 input crossings + 2 box-boundary exits per line.
        assert_eq!(arr.faces(0).len(), 4 + 3 + 3 * 2);
        assert_eq!(arr.vertex_points().len(), arr.faces(0).len());
    }
}
