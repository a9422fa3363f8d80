//! Range-set representation: the d-uniform hypergraph Π over index set
//! {0,..,n-1}, either complete (never materialized) or an explicit sorted
//! tuple list, together with the restricted-instance bundle.

use crate::geom::Point;
use crate::util::binomial;

/// A set of d-subsets of {0,..,n-1}. Tuples are strictly increasing index
/// vectors; the explicit list is sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RangeSet {
    Complete { n: usize, d: usize },
    Explicit { n: usize, d: usize, tuples: Vec<Vec<u32>> },
}

impl RangeSet {
    pub fn complete(n: usize, d: usize) -> RangeSet {
        RangeSet::Complete { n, d }
    }

    /// Builds an explicit set, normalizing tuple order and dropping
    /// duplicates. Panics on out-of-range indices or wrong tuple arity.
    pub fn explicit(n: usize, d: usize, mut tuples: Vec<Vec<u32>>) -> RangeSet {
        for t in tuples.iter_mut() {
            assert_eq!(t.len(), d, "tuple arity must equal d");
            t.sort_unstable();
            for w in t.windows(2) {
                assert!(w[0] != w[1], "tuple has a repeated index");
            }
            assert!((t[d - 1] as usize) < n, "tuple index out of range");
        }
        tuples.sort();
        tuples.dedup();
        RangeSet::Explicit { n, d, tuples }
    }

    pub fn n(&self) -> usize {
        match self {
            RangeSet::Complete { n, .. } | RangeSet::Explicit { n, .. } => *n,
        }
    }

    pub fn d(&self) -> usize {
        match self {
            RangeSet::Complete { d, .. } | RangeSet::Explicit { d, .. } => *d,
        }
    }

    pub fn len(&self) -> u128 {
        match self {
            RangeSet::Complete { n, d } => binomial(*n as u64, *d as u64),
            RangeSet::Explicit { tuples, .. } => tuples.len() as u128,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Density ρ = |Π| / C(n,d).
    pub fn rho(&self) -> f64 {
        let total = binomial(self.n() as u64, self.d() as u64);
        if total == 0 {
            return 0.0;
        }
        match self {
            RangeSet::Complete { .. } => 1.0,
            RangeSet::Explicit { tuples, .. } => tuples.len() as f64 / total as f64,
        }
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        debug_assert!(tuple.windows(2).all(|w| w[0] < w[1]));
        match self {
            RangeSet::Complete { n, d } => {
                tuple.len() == *d && tuple.iter().all(|&i| (i as usize) < *n)
            }
            RangeSet::Explicit { tuples, .. } => {
                tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).is_ok()
            }
        }
    }

    /// Visits every tuple in lexicographic order.
    pub fn for_each(&self, mut f: impl FnMut(&[u32])) {
        match self {
            RangeSet::Complete { n, d } => {
                crate::util::for_each_subset(*n, *d, |idx| {
                    let t: Vec<u32> = idx.iter().map(|&i| i as u32).collect();
                    f(&t);
                });
            }
            RangeSet::Explicit { tuples, .. } => {
                for t in tuples {
                    f(t);
                }
            }
        }
    }

    /// Materializes to an explicit set (must fit the cap).
    pub fn to_explicit(&self, cap: usize) -> Option<RangeSet> {
        if self.len() > cap as u128 {
            return None;
        }
        match self {
            RangeSet::Explicit { .. } => Some(self.clone()),
            RangeSet::Complete { n, d } => {
                let mut tuples = Vec::with_capacity(self.len() as usize);
                self.for_each(|t| tuples.push(t.to_vec()));
                Some(RangeSet::Explicit { n: *n, d: *d, tuples })
            }
        }
    }

    /// The subset of tuples satisfying the predicate, as an explicit set.
    /// Only valid when `self` is explicit or small enough to enumerate.
    pub fn filter(&self, cap: usize, mut keep: impl FnMut(&[u32]) -> bool) -> Option<RangeSet> {
        if matches!(self, RangeSet::Complete { .. }) && self.len() > cap as u128 {
            return None;
        }
        let mut tuples = Vec::new();
        self.for_each(|t| {
            if keep(t) {
                tuples.push(t.to_vec());
            }
        });
        Some(RangeSet::Explicit { n: self.n(), d: self.d(), tuples })
    }
}

/// A restricted instance: the family of convex sets K carrying a witness
/// P_K ⊆ P∩K of exactly ⌈εn⌉ points with at least σ·C(⌈εn⌉,d) of the
/// witness's d-subsets present in Π.
#[derive(Clone, Debug)]
pub struct Instance<'a> {
    pub points: &'a [Point],
    pub ranges: RangeSet,
    pub eps: f64,
    pub sigma: f64,
}

impl<'a> Instance<'a> {
    pub fn new(points: &'a [Point], ranges: RangeSet, eps: f64, sigma: f64) -> Instance<'a> {
        assert_eq!(ranges.n(), points.len(), "range universe must match P");
        assert!(eps > 0.0 && eps <= 1.0);
        assert!(sigma > 0.0 && sigma <= 1.0);
        Instance { points, ranges, eps, sigma }
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map(|p| p.dim()).unwrap_or(0)
    }

    /// Witness cardinality ⌈εn⌉.
    pub fn witness_size(&self) -> usize {
        (self.eps * self.n() as f64).ceil() as usize
    }

    pub fn rho(&self) -> f64 {
        self.ranges.rho()
    }
}
