//! Selection points, canonical vertical line families, and the spread/narrow
//! classifier for restricted subproblems.
//!
//! Both selection searches intersect affine hulls of disjoint subsets of a
//! point set, one family per codimension split, and return the candidate with
//! the highest exact piercing count; a simplex counts as pierced when its
//! closed hull contains the candidate. The second search runs on the image of
//! a hypergraph whose vertices may collide in space and seeds its pool with
//! per-edge barycenters. Line families place one deterministic interior proxy
//! in each nonempty class simplex of a projected partition and lift the
//! affine-hull intersections of disjoint proxy subsets to vertical lines. The
//! classifier reports either a line that pierces many listed simplices while
//! surrounded by the classes owning their vertices, or a hyperplane of the
//! projected space whose zone holds an outsized share of the points, or an
//! explicit undecided value.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::geom::{
    point_in_simplex_closed, GeomError, Hyperplane, Point, Simplex, VerticalLine,
};
use crate::partition::{crossing_number, VerticalPartition};
use crate::scalar::{dot, dyadic, format_rat, nullspace_basis, rat, solve_linear, Rat};
use crate::schedule::Schedule;
use crate::util::{binomial, binomial_f64, derive_seed, for_each_subset};

/// Errors reported by the selection searches.
#[derive(Debug, Error)]
pub enum SelectionError {
    /// The inputs cannot define a search.
    #[error("bad input: {0}")]
    BadInput(String),
    /// An exact geometric predicate rejected its operands.
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// Cap on the witness list carried by a [`SelectionResult`].
pub const PIERCED_SAMPLE_CAP: usize = 64;

/// Outcome of a selection search.
#[derive(Debug, Clone)]
pub struct SelectionResult {
    /// The selected point.
    pub point: Point,
    /// Exact number of input simplices whose closed hull contains `point`.
    pub pierced_count: usize,
    /// Up to [`PIERCED_SAMPLE_CAP`] pierced simplices, as vertex id lists.
    pub pierced_sample: Option<Vec<Vec<u32>>>,
    /// Whether every candidate the search defines was evaluated.
    pub exhaustive: bool,
}

/// Candidate pool with exact coordinate deduplication; the first push of a
/// location wins, so pool order encodes the tie-breaking priority.
struct CandidatePool {
    points: Vec<Point>,
    seen: BTreeSet<Vec<Rat>>,
}

impl CandidatePool {
    fn new() -> CandidatePool {
        CandidatePool { points: Vec::new(), seen: BTreeSet::new() }
    }

    fn push(&mut self, p: Point) {
        if self.seen.insert(p.coords().to_vec()) {
            self.points.push(p);
        }
    }
}

/// Weakly decreasing positive splits of `k`, the codimension patterns of the
/// candidate search, single-block split first.
fn partitions_of(k: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut part = rest.min(cap);
        while part >= 1 {
            prefix.push(part);
            rec(rest - part, part, prefix, out);
            prefix.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` with every tuple of pairwise disjoint id blocks of the given
/// sizes; consecutive equal-size blocks come in increasing order of first id
/// so unordered selections appear exactly once.
fn rec_disjoint(
    pool: &[u32],
    sizes: &[usize],
    prev: Option<(usize, u32)>,
    prefix: &mut Vec<Vec<u32>>,
    f: &mut dyn FnMut(&[Vec<u32>]),
) {
    let Some((&size, rest)) = sizes.split_first() else {
        f(prefix);
        return;
    };
    for_each_subset(pool.len(), size, |pick| {
        let block: Vec<u32> = pick.iter().map(|&j| pool[j]).collect();
        if let Some((psize, pfirst)) = prev {
            if psize == size && block[0] < pfirst {
                return;
            }
        }
        let remaining: Vec<u32> = pool.iter().copied().filter(|v| !block.contains(v)).collect();
        let head = (size, block[0]);
        prefix.push(block);
        rec_disjoint(&remaining, rest, Some(head), prefix, f);
        prefix.pop();
    });
}

/// Equation rows `<u, x> = b` of the affine hull of `pts` inside R^k. Affinely
/// dependent tuples yield more rows than their generic codimension; callers
/// detect that by the stacked row count.
fn affine_hull_rows(pts: &[&Point], k: usize) -> Vec<(Vec<Rat>, Rat)> {
    let base = pts[0];
    let diffs: Vec<Vec<Rat>> = pts[1..]
        .iter()
        .map(|p| (0..k).map(|j| p.coord(j) - base.coord(j)).collect())
        .collect();
    nullspace_basis(&diffs, k)
        .into_iter()
        .map(|u| {
            let off = dot(&u, base.coords());
            (u, off)
        })
        .collect()
}

/// Pushes every affine-intersection candidate spanned by `points`: for each
/// codimension pattern, all pairwise disjoint blocks whose hull equations
/// stack to a uniquely solvable square system. The single-block pattern
/// contributes the input points themselves, so they always lead the pool.
fn affine_candidates(points: &[Point], k: usize, pool: &mut CandidatePool) {
    let ids: Vec<u32> = (0..points.len() as u32).collect();
    for pattern in partitions_of(k) {
        let sizes: Vec<usize> = pattern.iter().map(|&c| k - c + 1).collect();
        rec_disjoint(&ids, &sizes, None, &mut Vec::new(), &mut |blocks| {
            let mut rows: Vec<Vec<Rat>> = Vec::new();
            let mut rhs: Vec<Rat> = Vec::new();
            for block in blocks {
                let pts: Vec<&Point> = block.iter().map(|&i| &points[i as usize]).collect();
                for (u, off) in affine_hull_rows(&pts, k) {
                    rows.push(u);
                    rhs.push(off);
                }
            }
            if rows.len() != k {
                return;
            }
            if let Some(x) = solve_linear(&rows, &rhs) {
                pool.push(Point::new(x));
            }
        });
    }
}

/// Upper bound on the number of block tuples the candidate search visits for
/// n points in R^k, ignoring disjointness.
fn affine_candidate_estimate(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    for pattern in partitions_of(k) {
        let mut prod: u128 = 1;
        for &c in &pattern {
            let s = k - c + 1;
            prod = prod.saturating_mul(binomial(n as u64, s as u64));
        }
        total = total.saturating_add(prod);
    }
    total
}

fn count_hits(x: &Point, hulls: &[Vec<Point>]) -> Result<usize, GeomError> {
    let mut n = 0usize;
    for hull in hulls {
        if point_in_simplex_closed(x, hull)? {
            n += 1;
        }
    }
    Ok(n)
}

fn pierced_ids(
    x: &Point,
    hulls: &[Vec<Point>],
    ids: &[Vec<u32>],
) -> Result<Vec<Vec<u32>>, GeomError> {
    let mut out = Vec::new();
    for (hull, id) in hulls.iter().zip(ids) {
        if out.len() == PIERCED_SAMPLE_CAP {
            break;
        }
        if point_in_simplex_closed(x, hull)? {
            out.push(id.clone());
        }
    }
    Ok(out)
}

/// Earliest candidate with the maximal hit count.
fn best_candidate(candidates: &[Point], hulls: &[Vec<Point>]) -> Result<(usize, usize), GeomError> {
    debug_assert!(!candidates.is_empty());
    let mut best = 0usize;
    let mut best_count = count_hits(&candidates[0], hulls)?;
    for (i, cand) in candidates.iter().enumerate().skip(1) {
        let c = count_hits(cand, hulls)?;
        if c > best_count {
            best = i;
            best_count = c;
        }
    }
    Ok((best, best_count))
}

/// Exhaustive first selection search over `points` in R^k: returns the pool
/// candidate piercing the most of the C(n, k+1) spanned simplices, earliest
/// candidate winning ties. The pool holds the input points and every exact
/// intersection of affine hulls of disjoint input subsets, so its size grows
/// polynomially with exponent k^2; the search is meant for small instances.
///
/// For n >= 2(k+1) the winner is checked against the guarantee that some
/// candidate pierces at least C(n, k+1)/(k+1)^{k+1} simplices.
pub fn first_selection_point(points: &[Point]) -> Result<SelectionResult, SelectionError> {
    let k = match points.first() {
        Some(p) => p.dim(),
        None => return Err(SelectionError::BadInput("empty point set".into())),
    };
    if points.iter().any(|p| p.dim() != k) {
        return Err(SelectionError::BadInput("mixed ambient dimensions".into()));
    }
    let n = points.len();
    if n < k + 1 {
        return Err(SelectionError::BadInput(format!(
            "needs at least {} points to span simplices in R^{k}, got {n}",
            k + 1
        )));
    }
    let mut ids: Vec<Vec<u32>> = Vec::new();
    for_each_subset(n, k + 1, |pick| {
        ids.push(pick.iter().map(|&i| i as u32).collect());
    });
    let hulls: Vec<Vec<Point>> = ids
        .iter()
        .map(|s| s.iter().map(|&i| points[i as usize].clone()).collect())
        .collect();
    let mut pool = CandidatePool::new();
    affine_candidates(points, k, &mut pool);
    let (best, pierced_count) = best_candidate(&pool.points, &hulls)?;
    let point = pool.points[best].clone();
    let pierced_sample = Some(pierced_ids(&point, &hulls, &ids)?);
    if n >= 2 * (k + 1) {
        let bound = binomial_f64(n as u64, k as u64 + 1) / ((k + 1) as f64).powi(k as i32 + 1);
        assert!(
            pierced_count as f64 + 1e-9 >= bound,
            "selection guarantee failed: {pierced_count} pierced simplices, bound {bound}"
        );
    }
    Ok(SelectionResult { point, pierced_count, pierced_sample, exhaustive: true })
}

fn barycenter_of(pts: &[Point], d: usize) -> Point {
    let scale = rat(pts.len() as i64);
    Point::new(
        (0..d)
            .map(|j| pts.iter().fold(Rat::zero(), |acc, p| acc + p.coord(j)) / &scale)
            .collect(),
    )
}

/// Calls `f` for every index-increasing d-tuple of pairwise vertex-disjoint
/// hyperedges.
fn for_each_disjoint_edge_tuple(edges: &[Vec<u32>], d: usize, f: &mut dyn FnMut(&[usize])) {
    for_each_subset(edges.len(), d, |pick| {
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        for &ei in pick {
            for &v in &edges[ei] {
                if !seen.insert(v) {
                    return;
                }
            }
        }
        f(pick);
    });
}

fn random_disjoint_edges(
    rng: &mut ChaCha8Rng,
    edges: &[Vec<u32>],
    d: usize,
) -> Option<Vec<usize>> {
    if edges.len() < d {
        return None;
    }
    for _ in 0..16 {
        let mut pick: BTreeSet<usize> = BTreeSet::new();
        while pick.len() < d {
            pick.insert(rng.gen_range(0..edges.len()));
        }
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        if pick.iter().all(|&ei| edges[ei].iter().all(|&v| seen.insert(v))) {
            return Some(pick.into_iter().collect());
        }
    }
    None
}

/// Intersects the affine hulls of one facet per listed hyperedge; `drops[i]`
/// names the vertex left out of edge `tuple[i]`. Degenerate facets and
/// parallel stacks are skipped.
fn facet_candidate(
    chi: &[Point],
    edges: &[Vec<u32>],
    tuple: &[usize],
    drops: &[usize],
    d: usize,
    pool: &mut CandidatePool,
) {
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(d);
    let mut rhs: Vec<Rat> = Vec::with_capacity(d);
    for (slot, &ei) in tuple.iter().enumerate() {
        let facet: Vec<&Point> = edges[ei]
            .iter()
            .enumerate()
            .filter(|&(vi, _)| vi != drops[slot])
            .map(|(_, &v)| &chi[v as usize])
            .collect();
        let hull = affine_hull_rows(&facet, d);
        if hull.len() != 1 {
            return;
        }
        let (u, off) = hull.into_iter().next().unwrap();
        rows.push(u);
        rhs.push(off);
    }
    if let Some(x) = solve_linear(&rows, &rhs) {
        pool.push(Point::new(x));
    }
}

fn push_facet_candidates(
    chi: &[Point],
    edges: &[Vec<u32>],
    tuple: &[usize],
    d: usize,
    pool: &mut CandidatePool,
) {
    let mut drops = vec![0usize; d];
    loop {
        facet_candidate(chi, edges, tuple, &drops, d, pool);
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            drops[i] += 1;
            if drops[i] <= d {
                break;
            }
            drops[i] = 0;
            i += 1;
        }
    }
}

/// Second selection over a hypergraph image. Vertex ids in `edges` index into
/// `chi`; every hyperedge needs d+1 distinct ids, and no spatial location may
/// repeat in `chi` more often than `conformity`. Candidates are evaluated in
/// a fixed order: per-edge barycenters, intersections of facet hulls over d
/// vertex-disjoint hyperedges, then the first-selection pool of the distinct
/// image points. Each enumeration stage runs in full only while the scheduled
/// tuple budget lasts; past it the facet family is replaced by a seeded
/// random sample and the first-selection pool shrinks to the image points,
/// with the result flagged non-exhaustive. The count is the exact number of
/// hyperedges whose closed image hull contains the winner, duplicates counted
/// per hyperedge.
pub fn second_selection_point(
    chi: &[Point],
    edges: &[Vec<u32>],
    conformity: usize,
    seed: u64,
    sched: &Schedule,
) -> Result<SelectionResult, SelectionError> {
    if edges.is_empty() {
        return Err(SelectionError::BadInput("no hyperedges listed".into()));
    }
    let d = match chi.first() {
        Some(p) => p.dim(),
        None => return Err(SelectionError::BadInput("empty vertex image".into())),
    };
    if chi.iter().any(|p| p.dim() != d) {
        return Err(SelectionError::BadInput("mixed ambient dimensions".into()));
    }
    if conformity == 0 {
        return Err(SelectionError::BadInput("conformity bound must be at least 1".into()));
    }
    for e in edges {
        if e.len() != d + 1 {
            return Err(SelectionError::BadInput(format!(
                "hyperedges need d+1 = {} vertices, got {}",
                d + 1,
                e.len()
            )));
        }
        if e.iter().any(|&v| v as usize >= chi.len()) {
            return Err(SelectionError::BadInput("hyperedge vertex out of range".into()));
        }
        let distinct: BTreeSet<u32> = e.iter().copied().collect();
        if distinct.len() != e.len() {
            return Err(SelectionError::BadInput("hyperedge repeats a vertex".into()));
        }
    }
    let mut multiplicity: BTreeMap<Vec<Rat>, usize> = BTreeMap::new();
    for p in chi {
        *multiplicity.entry(p.coords().to_vec()).or_insert(0) += 1;
    }
    let worst = multiplicity.values().copied().max().unwrap_or(0);
    if worst > conformity {
        return Err(SelectionError::BadInput(format!(
            "an image location repeats {worst} times, above the declared conformity {conformity}"
        )));
    }

    let hulls: Vec<Vec<Point>> = edges
        .iter()
        .map(|e| e.iter().map(|&v| chi[v as usize].clone()).collect())
        .collect();

    let mut pool = CandidatePool::new();
    for hull in &hulls {
        pool.push(barycenter_of(hull, d));
    }

    let mut exhaustive = true;
    let budget = sched.second_selection_budget as u128;
    let drops_per_tuple = ((d + 1) as u128).pow(d as u32);
    let facet_estimate =
        binomial(edges.len() as u64, d as u64).saturating_mul(drops_per_tuple);
    let spent = if facet_estimate <= budget {
        for_each_disjoint_edge_tuple(edges, d, &mut |tuple| {
            push_facet_candidates(chi, edges, tuple, d, &mut pool);
        });
        facet_estimate
    } else {
        exhaustive = false;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "second-selection", 0));
        let draws = budget.min(usize::MAX as u128) as usize;
        for _ in 0..draws {
            let Some(tuple) = random_disjoint_edges(&mut rng, edges, d) else {
                continue;
            };
            let drops: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=d)).collect();
            facet_candidate(chi, edges, &tuple, &drops, d, &mut pool);
        }
        budget
    };

    let mut distinct: Vec<Point> = Vec::new();
    let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for p in chi {
        if seen.insert(p.coords().to_vec()) {
            distinct.push(p.clone());
        }
    }
    if affine_candidate_estimate(distinct.len(), d) <= budget.saturating_sub(spent) {
        affine_candidates(&distinct, d, &mut pool);
    } else {
        for p in &distinct {
            pool.push(p.clone());
        }
        exhaustive = false;
    }

    let (best, pierced_count) = best_candidate(&pool.points, &hulls)?;
    let point = pool.points[best].clone();
    let pierced_sample = Some(pierced_ids(&point, &hulls, edges)?);
    Ok(SelectionResult { point, pierced_count, pierced_sample, exhaustive })
}

/// Vertical lines lifted from intersections of proxy affine hulls, with the
/// provenance to rebuild every base point.
#[derive(Debug, Clone)]
pub struct LineSet {
    d: usize,
    lines: Vec<VerticalLine>,
    origins: Vec<Vec<Vec<u32>>>,
    proxies: Vec<Option<Point>>,
}

impl LineSet {
    /// Ambient dimension of the lifted lines.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn lines(&self) -> &[VerticalLine] {
        &self.lines
    }

    /// Per line, the d-1 disjoint blocks of class ids whose proxy affine
    /// hulls intersect in its base point.
    pub fn origins(&self) -> &[Vec<Vec<u32>>] {
        &self.origins
    }

    /// Per class, the interior proxy point of its simplex.
    pub fn proxies(&self) -> &[Option<Point>] {
        &self.proxies
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// JSON dump of the family: base coordinates and provenance blocks per
    /// line, plus the proxy table.
    pub fn dump_json(&self) -> String {
        let lines: Vec<_> = self
            .lines
            .iter()
            .zip(&self.origins)
            .map(|(line, blocks)| {
                json!({
                    "base": line.base().coords().iter().map(format_rat).collect::<Vec<_>>(),
                    "blocks": blocks,
                })
            })
            .collect();
        let proxies: Vec<_> = self
            .proxies
            .iter()
            .map(|p| {
                p.as_ref()
                    .map(|p| json!(p.coords().iter().map(format_rat).collect::<Vec<_>>()))
                    .unwrap_or(json!(null))
            })
            .collect();
        serde_json::to_string_pretty(&json!({
            "d": self.d,
            "lines": lines,
            "proxies": proxies,
        }))
        .expect("line family serializes")
    }
}

/// Deterministic interior proxy for every nonempty class: the simplex
/// barycenter pulled a small dyadic step toward the first vertex. The step is
/// positive and below one, so the proxy stays strictly inside.
pub fn part_proxies(vp: &VerticalPartition) -> Vec<Option<Point>> {
    vp.parts()
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            entry.simplex.as_ref().map(|sx| {
                let verts = sx.vertices();
                let m = verts[0].dim();
                let scale = rat(verts.len() as i64);
                let w = dyadic(1, 6 + (i % 50) as u32);
                let coords: Vec<Rat> = (0..m)
                    .map(|j| {
                        let bary: Rat =
                            verts.iter().fold(Rat::zero(), |acc, v| acc + v.coord(j)) / &scale;
                        let pull = &w * (verts[0].coord(j) - &bary);
                        bary + pull
                    })
                    .collect();
                Point::new(coords)
            })
        })
        .collect()
}

/// Canonical vertical line family of a projected partition: one interior
/// proxy per nonempty class, then the lift of every exact intersection of
/// affine hulls of d-1 pairwise disjoint (d-1)-subsets of proxies. In d = 2
/// the blocks are single proxies and the family degenerates to their lifts.
/// Fewer than max((d-1)^2, 2) proxies yield an empty family; block tuples
/// without a unique finite intersection are skipped.
pub fn multiple_selection_lines(vp: &VerticalPartition) -> LineSet {
    let d = vp.d();
    let m = d - 1;
    let proxies = part_proxies(vp);
    let available: Vec<u32> = proxies
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.as_ref().map(|_| i as u32))
        .collect();
    let needed = (m * m).max(2);
    let mut lines: Vec<VerticalLine> = Vec::new();
    let mut origins: Vec<Vec<Vec<u32>>> = Vec::new();
    if available.len() >= needed {
        let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
        let sizes = vec![m; m];
        rec_disjoint(&available, &sizes, None, &mut Vec::new(), &mut |blocks| {
            let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
            let mut rhs: Vec<Rat> = Vec::with_capacity(m);
            for block in blocks {
                let pts: Vec<&Point> = block
                    .iter()
                    .map(|&pid| {
                        proxies[pid as usize].as_ref().expect("listed proxies are present")
                    })
                    .collect();
                let hull = affine_hull_rows(&pts, m);
                if hull.len() != 1 {
                    return;
                }
                let (u, off) = hull.into_iter().next().unwrap();
                rows.push(u);
                rhs.push(off);
            }
            if let Some(base) = solve_linear(&rows, &rhs) {
                if seen.insert(base.clone()) {
                    lines.push(VerticalLine::new(Point::new(base)));
                    origins.push(blocks.to_vec());
                }
            }
        });
    }
    let cap = (vp.r() as u128).pow((m * m) as u32);
    assert!(
        lines.len() as u128 <= cap,
        "line family exceeds its cap: {} lines from {} classes",
        lines.len(),
        vp.r()
    );
    LineSet { d, lines, origins, proxies }
}

/// Exact test that `x` cannot be cut off from the listed simplices: true iff
/// every open halfspace with `x` on its boundary misses at least one simplex
/// entirely, equivalently iff `x` lies in the closed hull of every vertex
/// choice taking one vertex per simplex. Needs dim(x) + 1 full-dimensional
/// simplices around a point of their ambient space.
pub fn surrounded(x: &Point, simplices: &[&Simplex]) -> Result<bool, SelectionError> {
    let m = x.dim();
    if simplices.len() != m + 1 {
        return Err(SelectionError::BadInput(format!(
            "needs {} simplices around a point of R^{m}, got {}",
            m + 1,
            simplices.len()
        )));
    }
    for sx in simplices {
        if sx.dim() != m || sx.k() != m {
            return Err(SelectionError::BadInput(
                "surrounding simplices must be full-dimensional around the point".into(),
            ));
        }
    }
    let mut choice = vec![0usize; simplices.len()];
    loop {
        let tuple: Vec<Point> = simplices
            .iter()
            .zip(&choice)
            .map(|(sx, &v)| sx.vertices()[v].clone())
            .collect();
        if !point_in_simplex_closed(x, &tuple)? {
            return Ok(false);
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(true);
            }
            choice[i] += 1;
            if choice[i] < simplices[i].vertices().len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Verdict of the spread/narrow dichotomy.
#[derive(Debug, Clone)]
pub enum SpreadClass {
    /// `lines[line]` pierces the listed simplices at `pierced` (indices into
    /// the input family) while surrounded by the classes owning their
    /// vertices.
    Spread { line: usize, pierced: Vec<u32> },
    /// A hyperplane of the projected space whose zone holds `zone_points`
    /// of the input points.
    Narrow { witness: Hyperplane, zone_points: usize },
    /// Neither certificate reached its scheduled threshold; both best scores
    /// are reported.
    Undecided { best_line_count: usize, best_zone: usize },
}

/// Decides the dichotomy for a point set assigned to the classes of `vp`.
/// Spread: some line of `lines` scores at least
/// c_pierce·sigma^{beta}·C(|points|, d) listed simplices whose d vertices lie
/// in d distinct classes with the line base surrounded by those class
/// simplices. Narrow: failing that, some hyperplane of the projected space
/// through d-1 pool points (class proxies and class simplex vertices) has a
/// zone holding at least c_nar·sigma^{beta}·|points| points. Otherwise the
/// explicit `Undecided` value carries both best scores. Ties go to the
/// earliest line or pool subset; structural misuse panics, the dichotomy
/// itself never errors.
pub fn classify_spread(
    points: &[Point],
    simplices: &[Vec<u32>],
    vp: &VerticalPartition,
    lines: &LineSet,
    sigma: f64,
    sched: &Schedule,
) -> SpreadClass {
    let d = vp.d();
    assert_eq!(lines.d(), d, "line family built for a different dimension");
    assert_eq!(vp.owner().len(), points.len(), "partition covers a different point set");
    assert!(sigma > 0.0 && sigma <= 1.0, "sigma must lie in (0,1]");
    let m = points.len();
    assert!(
        simplices.len() as f64 + 1e-9 >= sigma * binomial_f64(m as u64, d as u64),
        "listed family is too small for the declared density"
    );
    for s in simplices {
        assert_eq!(s.len(), d, "listed simplices need d vertices");
        assert!(s.iter().all(|&i| (i as usize) < m), "simplex vertex id out of range");
    }

    let sigma_pow = sigma.powf(sched.beta_dm1);
    let pierce_threshold = sched.c_pierce * sigma_pow * binomial_f64(m as u64, d as u64);
    let mut best_line = 0usize;
    let mut best_pierced: Vec<u32> = Vec::new();
    for (li, line) in lines.lines().iter().enumerate() {
        let mut memo: BTreeMap<Vec<u32>, bool> = BTreeMap::new();
        let mut pierced: Vec<u32> = Vec::new();
        for (si, s) in simplices.iter().enumerate() {
            let mut parts: Vec<u32> = s.iter().map(|&p| vp.owner()[p as usize]).collect();
            parts.sort_unstable();
            parts.dedup();
            if parts.len() != d {
                continue;
            }
            let hit = *memo.entry(parts.clone()).or_insert_with(|| {
                let refs: Vec<&Simplex> = parts
                    .iter()
                    .map(|&pid| {
                        vp.parts()[pid as usize]
                            .simplex
                            .as_ref()
                            .expect("classes owning points carry simplices")
                    })
                    .collect();
                surrounded(line.base(), &refs)
                    .expect("class simplices are full-dimensional in the projection")
            });
            if hit {
                pierced.push(si as u32);
            }
        }
        if pierced.len() > best_pierced.len() {
            best_line = li;
            best_pierced = pierced;
        }
    }
    if !best_pierced.is_empty() && best_pierced.len() as f64 + 1e-9 >= pierce_threshold {
        return SpreadClass::Spread { line: best_line, pierced: best_pierced };
    }
    let best_line_count = best_pierced.len();

    let mut pool: Vec<Point> = Vec::new();
    for p in lines.proxies().iter().flatten() {
        pool.push(p.clone());
    }
    for entry in vp.parts() {
        if let Some(sx) = &entry.simplex {
            pool.extend(sx.vertices().iter().cloned());
        }
    }
    let narrow_threshold = sched.c_nar * sigma_pow * m as f64;
    let mut best_zone = 0usize;
    let mut best_witness: Option<Hyperplane> = None;
    for_each_subset(pool.len(), d - 1, |pick| {
        let refs: Vec<&Point> = pick.iter().map(|&i| &pool[i]).collect();
        let Ok(g) = Hyperplane::through_points(&refs, None) else {
            return;
        };
        let zone = crossing_number(vp.projected(), &g).zone_points;
        if zone > best_zone {
            best_zone = zone;
            best_witness = Some(g);
        }
    });
    if let Some(witness) = best_witness {
        if best_zone > 0 && best_zone as f64 + 1e-9 >= narrow_threshold {
            return SpreadClass::Narrow { witness, zone_points: best_zone };
        }
    }
    SpreadClass::Undecided { best_line_count, best_zone }
}
