//! Small dense two-phase simplex solver, generic over the scalar.
//!
//! Used by the hull-membership predicate (margin LP) and by the oracle's
//! separating-direction search. The `f64` instantiation is a filter: it uses a
//! tolerance comparator and an iteration cap, and callers must confirm its
//! verdict exactly. The `Rat` instantiation uses Bland's rule throughout and
//! terminates with the exact optimum.
//!
//! Variables are implicitly nonnegative; callers model free variables as
//! differences of two nonnegative ones. Constraints are `<=` or `==`.

use crate::scalar::Rat;
use num::{One, Signed, Zero};

/// Scalar contract for the simplex tableau.
pub trait LpScalar: Clone + std::fmt::Debug {
    fn lp_zero() -> Self;
    fn lp_one() -> Self;
    /// Strictly positive (beyond tolerance for floats).
    fn is_pos(&self) -> bool;
    /// Strictly negative (beyond tolerance for floats).
    fn is_neg(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg_val(&self) -> Self;
    fn lt(&self, other: &Self) -> bool;
}

impl LpScalar for f64 {
    fn lp_zero() -> Self {
        0.0
    }
    fn lp_one() -> Self {
        1.0
    }
    fn is_pos(&self) -> bool {
        *self > 1e-9
    }
    fn is_neg(&self) -> bool {
        *self < -1e-9
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg_val(&self) -> Self {
        -self
    }
    fn lt(&self, other: &Self) -> bool {
        self < other
    }
}

impl LpScalar for Rat {
    fn lp_zero() -> Self {
        Rat::zero()
    }
    fn lp_one() -> Self {
        Rat::one()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg_val(&self) -> Self {
        -self.clone()
    }
    fn lt(&self, other: &Self) -> bool {
        self < other
    }
}

/// Constraint relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
}

/// One linear constraint over the structural variables.
#[derive(Clone, Debug)]
pub struct Constraint<F> {
    pub coeffs: Vec<F>,
    pub rel: Rel,
    pub rhs: F,
}

/// Maximization problem over nonnegative structural variables.
#[derive(Clone, Debug)]
pub struct Lp<F> {
    pub n_vars: usize,
    pub maximize: Vec<F>,
    pub constraints: Vec<Constraint<F>>,
}

/// Solver outcome. `Stalled` only occurs on the float instantiation when the
/// iteration cap is hit; exact callers treat it as a bug.
#[derive(Clone, Debug)]
pub enum LpResult<F> {
    Optimal { value: F, x: Vec<F> },
    Infeasible,
    Unbounded,
    Stalled,
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    obj: Vec<F>,
    basis: Vec<usize>,
    banned: Vec<bool>,
}

impl<F: LpScalar> Tableau<F> {
    fn ncols(&self) -> usize {
        self.obj.len()
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let pivot = self.rows[r][j].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.div(&pivot);
        }
        self.rhs[r] = self.rhs[r].div(&pivot);
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let m = self.rows.len();
        for i in 0..m {
            if i == r {
                continue;
            }
            let factor = self.rows[i][j].clone();
            if factor.is_pos() || factor.is_neg() {
                for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *v = v.sub(&factor.mul(p));
                }
                self.rhs[i] = self.rhs[i].sub(&factor.mul(&pivot_rhs));
            }
            // Exact zero in the pivot column regardless of rounding.
            self.rows[i][j] = F::lp_zero();
        }
        let factor = self.obj[j].clone();
        for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
            *v = v.sub(&factor.mul(p));
        }
        self.obj[j] = F::lp_zero();
        self.basis[r] = j;
    }

    /// Bland's rule iteration loop. Returns false on unboundedness.
    fn run(&mut self, iter_cap: usize) -> Result<bool, ()> {
        for _ in 0..iter_cap {
            let enter = (0..self.ncols()).find(|&j| !self.banned[j] && self.obj[j].is_pos());
            let j = match enter {
                Some(j) => j,
                None => return Ok(true),
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<F> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][j].is_pos() {
                    continue;
                }
                let ratio = self.rhs[r].div(&self.rows[r][j]);
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio.lt(b) || (!b.lt(&ratio) && self.basis[r] < self.basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
            match leave {
                Some(r) => self.pivot(r, j),
                None => return Ok(false),
            }
        }
        Err(())
    }
}

/// Solves the LP. `iter_cap` bounds the total pivot count per phase.
pub fn solve<F: LpScalar>(lp: &Lp<F>, iter_cap: usize) -> LpResult<F> {
    let m = lp.constraints.len();
    let n = lp.n_vars;
    debug_assert!(lp.maximize.len() == n);
    debug_assert!(lp.constraints.iter().all(|c| c.coeffs.len() == n));

    // Equality form: structural vars, then one slack per Le row, then
    // artificials as needed. Rows are normalized to rhs >= 0 first.
    let n_slack = lp.constraints.iter().filter(|c| c.rel == Rel::Le).count();
    let mut rows: Vec<Vec<F>> = Vec::with_capacity(m);
    let mut rhs: Vec<F> = Vec::with_capacity(m);
    let mut slack_col_of_row: Vec<Option<usize>> = vec![None; m];
    let mut next_slack = 0usize;
    for (i, c) in lp.constraints.iter().enumerate() {
        let negate = c.rhs.is_neg();
        let mut row: Vec<F> = Vec::with_capacity(n + n_slack);
        for v in &c.coeffs {
            row.push(if negate { v.neg_val() } else { v.clone() });
        }
        row.extend(std::iter::repeat(F::lp_zero()).take(n_slack));
        if c.rel == Rel::Le {
            let col = n + next_slack;
            next_slack += 1;
            row[col] = if negate { F::lp_one().neg_val() } else { F::lp_one() };
            slack_col_of_row[i] = Some(col);
        }
        rows.push(row);
        rhs.push(if negate { c.rhs.neg_val() } else { c.rhs.clone() });
    }

    // Basis: the slack column where it is +1, an artificial otherwise.
    let mut basis: Vec<usize> = vec![usize::MAX; m];
    let mut artificial_cols: Vec<usize> = Vec::new();
    let base_cols = n + n_slack;
    let mut total_cols = base_cols;
    for i in 0..m {
        let usable = slack_col_of_row[i]
            .filter(|&col| rows[i][col].is_pos());
        match usable {
            Some(col) => basis[i] = col,
            None => {
                let col = total_cols;
                total_cols += 1;
                artificial_cols.push(col);
                basis[i] = col;
            }
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row.extend(std::iter::repeat(F::lp_zero()).take(total_cols - base_cols));
        if basis[i] >= base_cols {
            row[basis[i]] = F::lp_one();
        }
    }

    let mut tab = Tableau {
        rows,
        rhs,
        obj: vec![F::lp_zero(); total_cols],
        basis,
        banned: vec![false; total_cols],
    };

    // Phase 1: maximize -sum(artificials), i.e. reduced costs of the real
    // columns under c = 0 except artificial columns at -1.
    if !artificial_cols.is_empty() {
        for &col in &artificial_cols {
            tab.obj[col] = F::lp_one().neg_val();
        }
        // Price out the basic artificials.
        for r in 0..m {
            if tab.basis[r] >= base_cols {
                let row = tab.rows[r].clone();
                for (v, p) in tab.obj.iter_mut().zip(&row) {
                    *v = v.add(p);
                }
            }
        }
        match tab.run(iter_cap) {
            Ok(true) => {}
            Ok(false) => return LpResult::Unbounded,
            Err(()) => return LpResult::Stalled,
        }
        // Infeasible iff an artificial keeps positive value.
        for r in 0..m {
            if tab.basis[r] >= base_cols && tab.rhs[r].is_pos() {
                return LpResult::Infeasible;
            }
        }
        // Drive remaining zero-value artificials out of the basis.
        for r in 0..m {
            if tab.basis[r] < base_cols {
                continue;
            }
            let j = (0..base_cols).find(|&j| {
                tab.rows[r][j].is_pos() || tab.rows[r][j].is_neg()
            });
            if let Some(j) = j {
                tab.pivot(r, j);
            }
        }
        for col in artificial_cols {
            tab.banned[col] = true;
        }
    }

    // Phase 2: rebuild the reduced-cost row from the real objective.
    for v in tab.obj.iter_mut() {
        *v = F::lp_zero();
    }
    for j in 0..n {
        tab.obj[j] = lp.maximize[j].clone();
    }
    for r in 0..m {
        let b = tab.basis[r];
        if b >= base_cols {
            // A zero-value artificial stuck in a redundant row: its row has no
            // nonzero real column, so it never pivots and contributes nothing.
            continue;
        }
        let c_b = if b < n {
            lp.maximize[b].clone()
        } else {
            F::lp_zero()
        };
        if c_b.is_pos() || c_b.is_neg() {
            let row = tab.rows[r].clone();
            for (v, p) in tab.obj.iter_mut().zip(&row) {
                *v = v.sub(&c_b.mul(p));
            }
        }
    }
    match tab.run(iter_cap) {
        Ok(true) => {}
        Ok(false) => return LpResult::Unbounded,
        Err(()) => return LpResult::Stalled,
    }

    let mut x = vec![F::lp_zero(); n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs[r].clone();
        }
    }
    let mut value = F::lp_zero();
    for j in 0..n {
        value = value.add(&lp.maximize[j].mul(&x[j]));
    }
    LpResult::Optimal { value, x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn le<F>(coeffs: Vec<F>, rhs: F) -> Constraint<F> {
        Constraint { coeffs, rel: Rel::Le, rhs }
    }

    fn eq<F>(coeffs: Vec<F>, rhs: F) -> Constraint<F> {
        Constraint { coeffs, rel: Rel::Eq, rhs }
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18.
        let lp = Lp {
            n_vars: 2,
            maximize: vec![rat(3), rat(5)],
            constraints: vec![
                le(vec![rat(1), rat(0)], rat(4)),
                le(vec![rat(0), rat(2)], rat(12)),
                le(vec![rat(3), rat(2)], rat(18)),
            ],
        };
        match solve(&lp, 10_000) {
            LpResult::Optimal { value, x } => {
                assert_eq!(value, rat(36));
                assert_eq!(x, vec![rat(2), rat(6)]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn equality_rows_and_phase_one() {
        // max x + y s.t. x + y + z = 1, x - y <= 0; optimum 1 at z = 0.
        let lp = Lp {
            n_vars: 3,
            maximize: vec![rat(1), rat(1), rat(0)],
            constraints: vec![
                eq(vec![rat(1), rat(1), rat(1)], rat(1)),
                le(vec![rat(1), rat(-1), rat(0)], rat(0)),
            ],
        };
        match solve(&lp, 10_000) {
            LpResult::Optimal { value, .. } => assert_eq!(value, rat(1)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_system() {
        // x <= -1 with x >= 0.
        let lp = Lp {
            n_vars: 1,
            maximize: vec![rat(0)],
            constraints: vec![le(vec![rat(1)], rat(-1))],
        };
        assert!(matches!(solve(&lp, 10_000), LpResult::Infeasible));
    }

    #[test]
    fn unbounded_direction() {
        let lp = Lp {
            n_vars: 2,
            maximize: vec![rat(1), rat(0)],
            constraints: vec![le(vec![rat(-1), rat(1)], rat(1))],
        };
        assert!(matches!(solve(&lp, 10_000), LpResult::Unbounded));
    }

    #[test]
    fn negative_rhs_normalization() {
        // max -x s.t. -x <= -2  (x >= 2): optimum -2.
        let lp = Lp {
            n_vars: 1,
            maximize: vec![rat(-1)],
            constraints: vec![le(vec![rat(-1)], rat(-2))],
        };
        match solve(&lp, 10_000) {
            LpResult::Optimal { value, x } => {
                assert_eq!(value, rat(-2));
                assert_eq!(x, vec![rat(2)]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn fractional_optimum_is_exact() {
        // max x s.t. 3x <= 1 -> x = 1/3.
        let lp = Lp {
            n_vars: 1,
            maximize: vec![rat(1)],
            constraints: vec![le(vec![rat(3)], rat(1))],
        };
        match solve(&lp, 10_000) {
            LpResult::Optimal { value, .. } => assert_eq!(value, ratio(1, 3)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn float_instantiation_matches() {
        let lp = Lp {
            n_vars: 2,
            maximize: vec![3.0, 5.0],
            constraints: vec![
                le(vec![1.0, 0.0], 4.0),
                le(vec![0.0, 2.0], 12.0),
                le(vec![3.0, 2.0], 18.0),
            ],
        };
        match solve(&lp, 10_000) {
            LpResult::Optimal { value, .. } => assert!((value - 36.0).abs() < 1e-9),
            other => panic!("expected optimum, got {other:?}"),
        }
    }
}
