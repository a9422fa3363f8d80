//! Weak-net verification. The exhaustive mode is a complete scan of all
//! witness-size subsets, accelerated by piercing-tuple pruning: a subset
//! whose prefix already contains a small tuple with a net point in its hull
//! can never be a violation, so the whole lexicographic subtree is skipped.
//! The adversarial mode is a seeded multi-start hill climb on a sampled
//! direction margin; it can only produce evidence of absence, never proof,
//! and its report says so.

use super::OracleError;
use crate::geom::{
    hull_margin, point_in_hull, point_in_simplex_closed, point_strictly_in_simplex, GeomError,
    HullPosition, Point,
};
use crate::scalar::Sign;
use crate::scalar::{format_rat, Rat};
use crate::util::{binomial, derive_seed, for_each_subset, parallel_map};
use num::{BigInt, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

const EXHAUSTIVE_SUBSET_CAP: u128 = 10_000_000;
const TUPLE_PRECOMPUTE_CAP: u128 = 50_000_000;
const FILTER_TUPLE_CAP: u128 = 10_000_000;
const FACET_ENUM_CAP: u128 = 1_000_000;
const EXACT_CHECKS_PER_START: u32 = 8;

#[derive(Clone, Debug)]
pub enum VerifyMode {
    Exhaustive,
    Adversarial { starts: u32, moves: u64 },
}

/// Restriction of the witness family being verified. Thresholds compare the
/// exact fraction of non-vertically-convex (d+1)-subsets of the witness.
#[derive(Clone, Debug)]
pub enum SubsetFilter {
    All,
    DeltaConvex(Rat),
    NonDeltaConvex(Rat),
}

/// Separation certificate for one net point against the witness hull.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub net_index: u32,
    pub direction: Vec<Rat>,
    pub margin: Rat,
}

/// A witness subset whose convex hull contains no net point.
#[derive(Clone, Debug)]
pub struct Violation {
    pub subset: Vec<u32>,
    pub hull_facets: Vec<Vec<u32>>,
    pub certificates: Vec<Certificate>,
}

impl Violation {
    pub fn report_json(&self) -> serde_json::Value {
        serde_json::json!({
            "subset": self.subset,
            "hull_facets": self.hull_facets,
            "certificates": self.certificates.iter().map(|c| {
                serde_json::json!({
                    "net_index": c.net_index,
                    "direction": c.direction.iter().map(format_rat).collect::<Vec<_>>(),
                    "margin": format_rat(&c.margin),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub violation: Option<Violation>,
    pub exhaustive: bool,
    pub witness_size: usize,
    pub total_subsets: u128,
    /// Leaves that survived pruning (exhaustive) or exact hull checks run
    /// (adversarial).
    pub subsets_checked: u128,
    pub starts_used: u32,
    pub moves_used: u64,
}

impl VerifyReport {
    /// Absence of a violation is proof only in exhaustive mode.
    pub fn evidence(&self) -> &'static str {
        if self.exhaustive {
            "exhaustive-proof"
        } else {
            "adversarial-evidence"
        }
    }
}

/// Smallest integer at least eps * n.
pub fn witness_size(eps: &Rat, n: usize) -> Result<usize, OracleError> {
    if !eps.is_positive() {
        return Err(OracleError::BadInput("eps must be positive".into()));
    }
    let m_rat = (eps * Rat::from_integer(BigInt::from(n))).ceil();
    let m = m_rat
        .to_integer()
        .to_usize()
        .ok_or_else(|| OracleError::BadInput("eps*n overflows".into()))?;
    if m > n {
        return Err(OracleError::BadInput(format!(
            "witness size {m} exceeds point count {n}"
        )));
    }
    Ok(m.max(1))
}

pub fn verify_weak_net(
    p: &[Point],
    eps: &Rat,
    net: &[Point],
    mode: &VerifyMode,
    filter: &SubsetFilter,
    seed: u64,
    jobs: usize,
) -> Result<VerifyReport, OracleError> {
    if p.is_empty() {
        return Err(OracleError::BadInput("empty point set".into()));
    }
    let d = p[0].dim();
    for q in p.iter().chain(net.iter()) {
        if q.dim() != d {
            return Err(GeomError::DimensionMismatch { expected: d, got: q.dim() }.into());
        }
    }
    let m = witness_size(eps, p.len())?;
    match mode {
        VerifyMode::Exhaustive => verify_exhaustive(p, net, m, filter, jobs),
        VerifyMode::Adversarial { starts, moves } => {
            verify_adversarial(p, net, m, filter, *starts, *moves, seed, jobs)
        }
    }
}

/// Exact vertical-convexity filter decision for a concrete witness subset,
/// with early abort around the threshold count. A witness too small to have
/// any (d+1)-subset counts as vertically convex.
fn filter_passes(points: &[Point], filter: &SubsetFilter) -> Result<bool, OracleError> {
    let (delta, want_convex) = match filter {
        SubsetFilter::All => return Ok(true),
        SubsetFilter::DeltaConvex(delta) => (delta, true),
        SubsetFilter::NonDeltaConvex(delta) => (delta, false),
    };
    let d = points[0].dim();
    let m = points.len();
    if m < d + 1 {
        return Ok(want_convex);
    }
    let total = binomial(m as u64, (d + 1) as u64);
    if total > FILTER_TUPLE_CAP {
        return Err(OracleError::Budget {
            what: "vertical-convexity filter".into(),
            limit: FILTER_TUPLE_CAP,
            got: total,
        });
    }
    // bad <= threshold means delta-convex.
    let threshold_rat = delta * Rat::from_integer(BigInt::from(total));
    let threshold = threshold_rat.floor().to_integer();
    let projected: Vec<Point> = points.iter().map(|q| q.project()).collect();
    let mut bad: u128 = 0;
    let mut decided: Option<bool> = None;
    for_each_subset(m, d + 1, |idx| {
        if decided.is_some() {
            return;
        }
        let is_bad = idx.iter().enumerate().any(|(slot, &i)| {
            let others: Vec<Point> = idx
                .iter()
                .enumerate()
                .filter(|&(s, _)| s != slot)
                .map(|(_, &j)| projected[j].clone())
                .collect();
            point_strictly_in_simplex(&projected[i], &others).unwrap_or(false)
        });
        if is_bad {
            bad += 1;
            if BigInt::from(bad) > threshold {
                decided = Some(!want_convex);
            }
        }
    });
    Ok(decided.unwrap_or(want_convex))
}

/// Piercing tuples: for tuple size k, all k-subsets of P whose hull contains
/// some net point. Any witness containing one of these is pierced.
fn piercing_tuples(
    p: &[Point],
    net: &[Point],
    k: usize,
    jobs: usize,
) -> Result<Vec<Vec<u32>>, OracleError> {
    let mut all_tuples: Vec<Vec<u32>> = Vec::new();
    for_each_subset(p.len(), k, |idx| {
        all_tuples.push(idx.iter().map(|&i| i as u32).collect());
    });
    let hits = parallel_map(net.len(), jobs, |qi| {
        let q = &net[qi];
        let mut local = vec![false; all_tuples.len()];
        for (t, tuple) in all_tuples.iter().enumerate() {
            let verts: Vec<Point> = tuple.iter().map(|&i| p[i as usize].clone()).collect();
            local[t] = point_in_simplex_closed(q, &verts).unwrap_or(false);
        }
        local
    });
    let mut forbidden = Vec::new();
    for (t, tuple) in all_tuples.into_iter().enumerate() {
        if hits.iter().any(|h| h[t]) {
            forbidden.push(tuple);
        }
    }
    Ok(forbidden)
}

fn verify_exhaustive(
    p: &[Point],
    net: &[Point],
    m: usize,
    filter: &SubsetFilter,
    jobs: usize,
) -> Result<VerifyReport, OracleError> {
    let n = p.len();
    let d = p[0].dim();
    let total = binomial(n as u64, m as u64);
    if total > EXHAUSTIVE_SUBSET_CAP {
        return Err(OracleError::Budget {
            what: "exhaustive witness scan".into(),
            limit: EXHAUSTIVE_SUBSET_CAP,
            got: total,
        });
    }
    let k = m.min(d + 1);
    let precompute = binomial(n as u64, k as u64).saturating_mul(net.len().max(1) as u128);
    if precompute > TUPLE_PRECOMPUTE_CAP {
        return Err(OracleError::Budget {
            what: "piercing tuple precompute".into(),
            limit: TUPLE_PRECOMPUTE_CAP,
            got: precompute,
        });
    }
    let forbidden = piercing_tuples(p, net, k, jobs)?;
    // Tuples bucketed by their largest index: the prune test runs when that
    // index is appended to the prefix.
    let mut buckets: Vec<Vec<&[u32]>> = vec![Vec::new(); n];
    for tuple in &forbidden {
        buckets[*tuple.last().unwrap() as usize].push(tuple.as_slice());
    }

    let mut in_prefix = vec![false; n];
    let mut prefix: Vec<u32> = Vec::with_capacity(m);
    let mut leaves: u128 = 0;
    let violation = dfs_first_violation(
        p,
        net,
        m,
        filter,
        &buckets,
        &mut prefix,
        &mut in_prefix,
        0,
        &mut leaves,
    )?;
    Ok(VerifyReport {
        violation,
        exhaustive: true,
        witness_size: m,
        total_subsets: total,
        subsets_checked: leaves,
        starts_used: 0,
        moves_used: 0,
    })
}

/// Depth-first scan in lexicographic order. Returns the first witness subset
/// that passes the filter and whose hull contains no net point.
#[allow(clippy::too_many_arguments)]
fn dfs_first_violation(
    p: &[Point],
    net: &[Point],
    m: usize,
    filter: &SubsetFilter,
    buckets: &[Vec<&[u32]>],
    prefix: &mut Vec<u32>,
    in_prefix: &mut [bool],
    from: usize,
    leaves: &mut u128,
) -> Result<Option<Violation>, OracleError> {
    if prefix.len() == m {
        *leaves += 1;
        let points: Vec<Point> = prefix.iter().map(|&i| p[i as usize].clone()).collect();
        if !filter_passes(&points, filter)? {
            return Ok(None);
        }
        return Ok(Some(build_violation(p, net, prefix)?));
    }
    let remaining = m - prefix.len();
    let n = p.len();
    for i in from..=(n - remaining) {
        // Pruning: if the prefix plus i contains a pierced tuple, every
        // completion is pierced.
        let pierced = buckets[i].iter().any(|tuple| {
            tuple[..tuple.len() - 1]
                .iter()
                .all(|&e| in_prefix[e as usize])
        });
        if pierced {
            continue;
        }
        prefix.push(i as u32);
        in_prefix[i] = true;
        let found = dfs_first_violation(
            p, net, m, filter, buckets, prefix, in_prefix, i + 1, leaves,
        )?;
        prefix.pop();
        in_prefix[i] = false;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Assembles the reportable violation: facet index lists (when affordable)
/// and one exact separation certificate per net point.
fn build_violation(p: &[Point], net: &[Point], subset: &[u32]) -> Result<Violation, OracleError> {
    let points: Vec<Point> = subset.iter().map(|&i| p[i as usize].clone()).collect();
    let d = p[0].dim();
    let m = points.len();
    let mut hull_facets: Vec<Vec<u32>> = Vec::new();
    if m >= d && binomial(m as u64, d as u64) <= FACET_ENUM_CAP {
        for_each_subset(m, d, |idx| {
            let refs: Vec<&Point> = idx.iter().map(|&i| &points[i]).collect();
            if crate::geom::affine_rank(&refs) != d - 1 {
                return;
            }
            let h = match crate::geom::Hyperplane::through_points(&refs, None) {
                Ok(h) => h,
                Err(_) => return,
            };
            let mut pos = false;
            let mut neg = false;
            for (i, q) in points.iter().enumerate() {
                if idx.contains(&i) {
                    continue;
                }
                match h.side(q) {
                    Sign::Pos => pos = true,
                    Sign::Neg => neg = true,
                    Sign::Zero => {}
                }
            }
            if !(pos && neg) {
                hull_facets.push(idx.iter().map(|&i| subset[i]).collect());
            }
        });
    }
    let mut certificates = Vec::with_capacity(net.len());
    for (qi, q) in net.iter().enumerate() {
        let (margin, direction) = hull_margin(q, &points)?;
        assert!(
            margin.is_positive(),
            "claimed violation is pierced by net point {qi}"
        );
        certificates.push(Certificate { net_index: qi as u32, direction, margin });
    }
    Ok(Violation { subset: subset.to_vec(), hull_facets, certificates })
}

/// Monotone order-preserving key for f64 values, usable in BTreeMap.
fn f64_key(x: f64) -> u64 {
    let bits = x.to_bits();
    if bits >> 63 == 0 {
        bits | (1 << 63)
    } else {
        !bits
    }
}

struct DirectionPool {
    dirs: Vec<Vec<f64>>,
}

impl DirectionPool {
    fn new(d: usize, seed: u64) -> DirectionPool {
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for j in 0..d {
            for sgn in [1.0f64, -1.0] {
                let mut v = vec![0.0; d];
                v[j] = sgn;
                dirs.push(v);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "adv-dirs", 0));
        while dirs.len() < 2 * d + 32 {
            let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-3 {
                dirs.push(v.iter().map(|x| x / norm).collect());
            }
        }
        DirectionPool { dirs }
    }
}

/// Hill-climb state for one start: the working subset and, per direction,
/// the multiset of member projections keyed for max queries.
struct ClimbState {
    members: Vec<usize>,
    member_pos: Vec<Option<usize>>,
    complement: Vec<usize>,
    comp_pos: Vec<Option<usize>>,
    tops: Vec<BTreeMap<u64, u32>>,
    // Per net point: sampled margin per direction uses shared dir maxima.
    scores: Vec<f64>,
    argmax: Vec<usize>,
    f: f64,
}

fn dir_max(map: &BTreeMap<u64, u32>) -> u64 {
    *map.keys().next_back().expect("nonempty member set")
}

/// Max after hypothetically removing one value and adding another.
fn dir_max_swapped(map: &BTreeMap<u64, u32>, out_key: u64, in_key: u64) -> u64 {
    let cur = dir_max(map);
    let removed_max = if out_key == cur {
        match map.get(&cur) {
            Some(&c) if c > 1 => cur,
            _ => map.range(..cur).next_back().map(|(&k, _)| k).unwrap_or(u64::MIN),
        }
    } else {
        cur
    };
    removed_max.max(in_key)
}

#[allow(clippy::too_many_arguments)]
fn verify_adversarial(
    p: &[Point],
    net: &[Point],
    m: usize,
    filter: &SubsetFilter,
    starts: u32,
    moves: u64,
    seed: u64,
    jobs: usize,
) -> Result<VerifyReport, OracleError> {
    let n = p.len();
    let d = p[0].dim();
    let total = binomial(n as u64, m as u64);
    if net.is_empty() {
        let subset: Vec<u32> = (0..m as u32).collect();
        let violation = build_violation(p, net, &subset)?;
        return Ok(VerifyReport {
            violation: Some(violation),
            exhaustive: false,
            witness_size: m,
            total_subsets: total,
            subsets_checked: 1,
            starts_used: 0,
            moves_used: 0,
        });
    }
    let pool = DirectionPool::new(d, seed);
    // Projections of every point and net point onto every direction.
    let proj: Vec<Vec<f64>> = pool
        .dirs
        .iter()
        .map(|v| p.iter().map(|q| dot_approx(v, q)).collect())
        .collect();
    let net_proj: Vec<Vec<f64>> = pool
        .dirs
        .iter()
        .map(|v| net.iter().map(|q| dot_approx(v, q)).collect())
        .collect();

    let results = parallel_map(starts as usize, jobs, |s| {
        run_climb(
            p,
            net,
            m,
            filter,
            &pool,
            &proj,
            &net_proj,
            moves,
            derive_seed(seed, "adv-start", s as u64),
        )
    });
    let mut moves_used: u64 = 0;
    let mut checks: u128 = 0;
    let mut violation: Option<Violation> = None;
    for r in results {
        let (used, exact_checks, found) = r?;
        moves_used += used;
        checks += exact_checks as u128;
        if violation.is_none() {
            violation = found;
        }
    }
    Ok(VerifyReport {
        violation,
        exhaustive: false,
        witness_size: m,
        total_subsets: total,
        subsets_checked: checks,
        starts_used: starts,
        moves_used,
    })
}

fn dot_approx(v: &[f64], q: &Point) -> f64 {
    v.iter().zip(q.approx()).map(|(a, b)| a * b).sum()
}

/// Exact confirmation that no net point lies in the hull of the subset.
fn exact_empty(
    p: &[Point],
    net: &[Point],
    members: &[usize],
) -> Result<bool, OracleError> {
    let points: Vec<Point> = members.iter().map(|&i| p[i].clone()).collect();
    for q in net {
        if point_in_hull(q, &points)? != HullPosition::Outside {
            return Ok(false);
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn run_climb(
    p: &[Point],
    net: &[Point],
    m: usize,
    filter: &SubsetFilter,
    pool: &DirectionPool,
    proj: &[Vec<f64>],
    net_proj: &[Vec<f64>],
    moves: u64,
    start_seed: u64,
) -> Result<(u64, u32, Option<Violation>), OracleError> {
    let n = p.len();
    let n_dirs = pool.dirs.len();
    let n_net = net.len();
    let mut rng = ChaCha8Rng::seed_from_u64(start_seed);

    // Random initial subset via partial shuffle.
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.gen_range(i..n);
        order.swap(i, j);
    }
    let members: Vec<usize> = order[..m].to_vec();
    let complement: Vec<usize> = order[m..].to_vec();
    let mut member_pos = vec![None; n];
    for (idx, &i) in members.iter().enumerate() {
        member_pos[i] = Some(idx);
    }
    let mut comp_pos = vec![None; n];
    for (idx, &i) in complement.iter().enumerate() {
        comp_pos[i] = Some(idx);
    }
    let mut tops: Vec<BTreeMap<u64, u32>> = Vec::with_capacity(n_dirs);
    for k in 0..n_dirs {
        let mut map = BTreeMap::new();
        for &i in &members {
            *map.entry(f64_key(proj[k][i])).or_insert(0u32) += 1;
        }
        tops.push(map);
    }
    let mut state = ClimbState {
        members,
        member_pos,
        complement,
        comp_pos,
        tops,
        scores: vec![f64::NEG_INFINITY; n_net],
        argmax: vec![0; n_net],
        f: f64::NEG_INFINITY,
    };
    rescore_all(&mut state, net_proj, proj, n_dirs, n_net);

    let mut moves_used = 0u64;
    let mut exact_checks = 0u32;
    let mut last_checked_f = f64::NEG_INFINITY;

    if state.f > 0.0 && exact_checks < EXACT_CHECKS_PER_START {
        exact_checks += 1;
        last_checked_f = state.f;
        if exact_empty(p, net, &state.members)? {
            if let Some(v) = confirm_violation(p, net, &state.members, filter)? {
                return Ok((moves_used, exact_checks, Some(v)));
            }
        }
    }

    while moves_used < moves {
        moves_used += 1;
        let out = state.members[rng.gen_range(0..m)];
        let inn = state.complement[rng.gen_range(0..n - m)];
        // Candidate maxima in directions where out or inn matter.
        let mut new_f = f64::INFINITY;
        let mut changed: Vec<(usize, f64)> = Vec::new();
        for k in 0..n_dirs {
            let out_key = f64_key(proj[k][out]);
            let in_key = f64_key(proj[k][inn]);
            let cur = dir_max(&state.tops[k]);
            let cand = dir_max_swapped(&state.tops[k], out_key, in_key);
            if cand != cur {
                changed.push((k, key_to_f64(cand)));
            }
        }
        if changed.is_empty() {
            // Hull support unchanged in every sampled direction: margins are
            // identical, nothing to gain.
            continue;
        }
        for j in 0..n_net {
            let mut score = state.scores[j];
            let mut needs_rescan = false;
            for &(k, newmax) in &changed {
                let marg = net_proj[k][j] - newmax;
                if k == state.argmax[j] {
                    if marg >= score {
                        score = marg;
                    } else {
                        needs_rescan = true;
                    }
                } else if marg > score {
                    score = marg;
                }
            }
            if needs_rescan {
                score = f64::NEG_INFINITY;
                for k in 0..n_dirs {
                    let newmax = changed
                        .iter()
                        .find(|&&(ck, _)| ck == k)
                        .map(|&(_, v)| v)
                        .unwrap_or_else(|| key_to_f64(dir_max(&state.tops[k])));
                    let marg = net_proj[k][j] - newmax;
                    if marg > score {
                        score = marg;
                    }
                }
            }
            if score < new_f {
                new_f = score;
            }
            if new_f <= state.f {
                break;
            }
        }
        if new_f <= state.f {
            continue;
        }
        // Accept: commit the swap.
        apply_swap(&mut state, out, inn, proj, n_dirs);
        rescore_all(&mut state, net_proj, proj, n_dirs, n_net);
        if state.f > 0.0
            && state.f > last_checked_f
            && exact_checks < EXACT_CHECKS_PER_START
        {
            exact_checks += 1;
            last_checked_f = state.f;
            if exact_empty(p, net, &state.members)? {
                if let Some(v) = confirm_violation(p, net, &state.members, filter)? {
                    return Ok((moves_used, exact_checks, Some(v)));
                }
            }
        }
    }
    // Final exact pass on the best state reached, even when the sampled
    // margin never went positive: sampled directions undercount true margins.
    if exact_checks < EXACT_CHECKS_PER_START && exact_empty(p, net, &state.members)? {
        exact_checks += 1;
        if let Some(v) = confirm_violation(p, net, &state.members, filter)? {
            return Ok((moves_used, exact_checks, Some(v)));
        }
    }
    Ok((moves_used, exact_checks, None))
}

fn key_to_f64(key: u64) -> f64 {
    let bits = if key >> 63 == 1 { key & !(1 << 63) } else { !key };
    f64::from_bits(bits)
}

fn rescore_all(
    state: &mut ClimbState,
    net_proj: &[Vec<f64>],
    _proj: &[Vec<f64>],
    n_dirs: usize,
    n_net: usize,
) {
    let maxima: Vec<f64> = (0..n_dirs).map(|k| key_to_f64(dir_max(&state.tops[k]))).collect();
    let mut f = f64::INFINITY;
    for j in 0..n_net {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for (k, &mx) in maxima.iter().enumerate() {
            let marg = net_proj[k][j] - mx;
            if marg > best {
                best = marg;
                arg = k;
            }
        }
        state.scores[j] = best;
        state.argmax[j] = arg;
        if best < f {
            f = best;
        }
    }
    state.f = f;
}

fn apply_swap(state: &mut ClimbState, out: usize, inn: usize, proj: &[Vec<f64>], n_dirs: usize) {
    let mp = state.member_pos[out].expect("out is a member");
    let cp = state.comp_pos[inn].expect("inn is a non-member");
    state.members[mp] = inn;
    state.complement[cp] = out;
    state.member_pos[inn] = Some(mp);
    state.member_pos[out] = None;
    state.comp_pos[out] = Some(cp);
    state.comp_pos[inn] = None;
    for k in 0..n_dirs {
        let out_key = f64_key(proj[k][out]);
        let in_key = f64_key(proj[k][inn]);
        let remove = {
            let c = state.tops[k].get_mut(&out_key).expect("member key present");
            *c -= 1;
            *c == 0
        };
        if remove {
            state.tops[k].remove(&out_key);
        }
        *state.tops[k].entry(in_key).or_insert(0) += 1;
    }
}

/// Filter check plus violation assembly for an exactly-confirmed empty
/// subset found by the adversarial search.
fn confirm_violation(
    p: &[Point],
    net: &[Point],
    members: &[usize],
    filter: &SubsetFilter,
) -> Result<Option<Violation>, OracleError> {
    let points: Vec<Point> = members.iter().map(|&i| p[i].clone()).collect();
    if !filter_passes(&points, filter)? {
        return Ok(None);
    }
    let mut subset: Vec<u32> = members.iter().map(|&i| i as u32).collect();
    subset.sort_unstable();
    Ok(Some(build_violation(p, net, &subset)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{generate_points, GenKind, GeneratorSpec};
    use crate::scalar::{rat, ratio};

    fn pts2(coords: &[(i64, i64)]) -> Vec<Point> {
        coords
            .iter()
            .map(|&(x, y)| Point::from_i64(&[x, y]))
            .collect()
    }

    #[test]
    fn net_equal_to_points_is_never_violated() {
        let p = generate_points(&GeneratorSpec {
            kind: GenKind::UniformCube,
            d: 2,
            n: 10,
            seed: 4,
        })
        .unwrap();
        let report = verify_weak_net(
            &p,
            &ratio(1, 2),
            &p,
            &VerifyMode::Exhaustive,
            &SubsetFilter::All,
            0,
            1,
        )
        .unwrap();
        assert!(report.violation.is_none());
        assert_eq!(report.evidence(), "exhaustive-proof");
    }

    #[test]
    fn empty_net_yields_first_lexicographic_witness() {
        let p = pts2(&[(0, 0), (4, 0), (0, 4), (4, 4), (2, 7), (7, 2)]);
        let report = verify_weak_net(
            &p,
            &ratio(1, 2),
            &[],
            &VerifyMode::Exhaustive,
            &SubsetFilter::All,
            0,
            1,
        )
        .unwrap();
        let v = report.violation.expect("empty net must be violated");
        assert_eq!(v.subset, vec![0, 1, 2]);
        assert!(v.certificates.is_empty());
    }

    #[test]
    fn far_net_point_is_detected_exhaustively() {
        // 12 points, eps = 1/2: C(12,6) = 924 subsets, one useless net point.
        let p = generate_points(&GeneratorSpec {
            kind: GenKind::UniformCube,
            d: 2,
            n: 12,
            seed: 9,
        })
        .unwrap();
        let net = vec![Point::from_i64(&[1000, 1000])];
        let report = verify_weak_net(
            &p,
            &ratio(1, 2),
            &net,
            &VerifyMode::Exhaustive,
            &SubsetFilter::All,
            0,
            1,
        )
        .unwrap();
        let v = report.violation.expect("distant net point pierces nothing");
        assert_eq!(v.subset.len(), 6);
        assert_eq!(v.certificates.len(), 1);
        // Certificate re-checks: the net point is strictly outside.
        let witness: Vec<Point> = v.subset.iter().map(|&i| p[i as usize].clone()).collect();
        assert_eq!(
            point_in_hull(&net[0], &witness).unwrap(),
            HullPosition::Outside
        );
        assert!(v.certificates[0].margin.is_positive());
    }

    #[test]
    fn planted_empty_hull_is_found() {
        // A cluster of 5 plus 5 far-away points; the net covers only the
        // cluster, so the far five form an empty witness and a violation is
        // guaranteed. The search may surface a lexicographically earlier
        // mixed witness; what matters is that the one reported is empty.
        let mut p = pts2(&[(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]);
        p.extend(pts2(&[(100, 100), (104, 100), (100, 104), (104, 104), (102, 107)]));
        let net = pts2(&[(1, 1)]);
        let report = verify_weak_net(
            &p,
            &ratio(1, 2),
            &net,
            &VerifyMode::Exhaustive,
            &SubsetFilter::All,
            0,
            1,
        )
        .unwrap();
        let v = report.violation.expect("far cluster is an empty witness");
        assert_eq!(v.subset.len(), 5);
        let witness: Vec<Point> = v.subset.iter().map(|&i| p[i as usize].clone()).collect();
        assert_eq!(
            point_in_hull(&net[0], &witness).unwrap(),
            HullPosition::Outside
        );
        assert!(!v.certificates.is_empty());
    }

    #[test]
    fn adversarial_finds_planted_empty_hull() {
        let mut p = Vec::new();
        // 20-point grid cluster plus a 10-point far cluster.
        for i in 0..20i64 {
            p.push(Point::from_i64(&[(i % 5) * 2, (i / 5) * 2]));
        }
        for i in 0..10i64 {
            p.push(Point::from_i64(&[200 + (i % 5) * 3, 200 + (i / 5) * 3]));
        }
        let p = crate::geom::perturb_general_position(&p, None, 77, 32).unwrap();
        // Net point inside the near cluster only; the far cluster alone
        // already guarantees an empty witness of size 10 exists. The climber
        // may land on any empty witness; re-check the one it reports.
        let net = vec![Point::from_i64(&[4, 2])];
        let report = verify_weak_net(
            &p,
            &ratio(1, 3),
            &net,
            &VerifyMode::Adversarial { starts: 16, moves: 4000 },
            &SubsetFilter::All,
            5,
            1,
        )
        .unwrap();
        assert_eq!(report.evidence(), "adversarial-evidence");
        let v = report.violation.expect("an empty witness is reachable");
        assert_eq!(v.subset.len(), 10);
        let witness: Vec<Point> = v.subset.iter().map(|&i| p[i as usize].clone()).collect();
        assert_eq!(
            point_in_hull(&net[0], &witness).unwrap(),
            HullPosition::Outside
        );
        assert!(v.certificates.iter().all(|c| c.margin.is_positive()));
    }

    #[test]
    fn adversarial_absence_is_labeled_evidence() {
        let p = generate_points(&GeneratorSpec {
            kind: GenKind::UniformBall,
            d: 2,
            n: 16,
            seed: 21,
        })
        .unwrap();
        let report = verify_weak_net(
            &p,
            &ratio(1, 2),
            &p,
            &VerifyMode::Adversarial { starts: 4, moves: 500 },
            &SubsetFilter::All,
            3,
            1,
        )
        .unwrap();
        assert!(report.violation.is_none());
        assert_eq!(report.evidence(), "adversarial-evidence");
        assert!(report.moves_used > 0);
    }

    #[test]
    fn filters_split_witness_families() {
        // Surrounded clusters: inner-cluster witnesses are non-convex.
        let p = generate_points(&GeneratorSpec {
            kind: GenKind::SurroundedClusters,
            d: 3,
            n: 12,
            seed: 2,
        })
        .unwrap();
        let delta = ratio(1, 10);
        // With an empty net, both filters find their first passing witness.
        let convex = verify_weak_net(
            &p,
            &ratio(1, 3),
            &[],
            &VerifyMode::Exhaustive,
            &SubsetFilter::DeltaConvex(delta.clone()),
            0,
            1,
        )
        .unwrap();
        let nonconvex = verify_weak_net(
            &p,
            &ratio(1, 3),
            &[],
            &VerifyMode::Exhaustive,
            &SubsetFilter::NonDeltaConvex(delta.clone()),
            0,
            1,
        )
        .unwrap();
        let wc = convex.violation.expect("some convex witness exists");
        let wn = nonconvex.violation.expect("some non-convex witness exists");
        assert_ne!(wc.subset, wn.subset);
        // Cross-check both subsets against the raw measurement.
        let pts_c: Vec<Point> = wc.subset.iter().map(|&i| p[i as usize].clone()).collect();
        let pts_n: Vec<Point> = wn.subset.iter().map(|&i| p[i as usize].clone()).collect();
        assert!(crate::oracle::vertical_delta_convexity(&pts_c).unwrap() <= delta);
        assert!(crate::oracle::vertical_delta_convexity(&pts_n).unwrap() > delta);
    }

    #[test]
    fn witness_size_rounds_up() {
        assert_eq!(witness_size(&ratio(1, 3), 10).unwrap(), 4);
        assert_eq!(witness_size(&ratio(1, 2), 10).unwrap(), 5);
        assert_eq!(witness_size(&rat(1), 7).unwrap(), 7);
        assert!(witness_size(&rat(2), 7).is_err());
        assert!(witness_size(&rat(0), 7).is_err());
    }

    #[test]
    fn violation_report_is_json_with_exact_scalars() {
        let p = pts2(&[(0, 0), (2, 0), (0, 2), (9, 9), (12, 9), (9, 12)]);
        let net = pts2(&[(1, 1)]);
        let report = verify_weak_net(
            &p,
            &ratio(1, 2),
            &net,
            &VerifyMode::Exhaustive,
            &SubsetFilter::All,
            0,
            1,
        )
        .unwrap();
        let v = report.violation.unwrap();
        let json = v.report_json();
        assert_eq!(json["subset"].as_array().unwrap().len(), 3);
        let margin = json["certificates"][0]["margin"].as_str().unwrap();
        assert!(crate::scalar::parse_rat(margin).unwrap().is_positive());
    }
}
