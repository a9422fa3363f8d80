//! Exact rational scalars with floating-point filtering.
//!
//! Every geometric predicate in this crate is exact: the fast path evaluates a
//! determinant in `f64` together with a forward error bound, and only when the
//! bound cannot certify the sign does the slow path re-evaluate over
//! `BigRational`. Coordinates produced by the generators and the perturbation
//! code are dyadic (denominators are powers of two), which keeps the exact
//! path cheap when it is taken.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact scalar used throughout the crate.
pub type Rat = BigRational;

/// Sign of an exact quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(r: &Rat) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    /// Certifies the sign of a float `value` carrying absolute error at most
    /// `err`. Returns `None` when the interval straddles zero.
    pub fn of_f64_filtered(value: f64, err: f64) -> Option<Sign> {
        if !value.is_finite() || !err.is_finite() {
            return None;
        }
        if value > err {
            Some(Sign::Pos)
        } else if value < -err {
            Some(Sign::Neg)
        } else {
            None
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// `n / 2^log2_den` as an exact rational.
pub fn dyadic(n: i64, log2_den: u32) -> Rat {
    Rat::new(BigInt::from(n), BigInt::one() << log2_den)
}

/// Exact rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact rational `p / q`; panics when `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Nearest-representable `f64` approximation.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parse error for the `p/q` scalar syntax.
#[derive(Debug, thiserror::Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRatError {
    pub literal: String,
    pub reason: String,
}

/// Parses an integer (`-17`) or a ratio (`-17/4`). No whitespace inside the
/// token, no decimal point syntax.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let bad = |reason: &str| ParseRatError {
        literal: s.to_string(),
        reason: reason.to_string(),
    };
    let mut parts = s.splitn(2, '/');
    let numer = parts.next().ok_or_else(|| bad("empty token"))?;
    let numer: BigInt = numer.parse().map_err(|_| bad("numerator is not an integer"))?;
    match parts.next() {
        None => Ok(Rat::from_integer(numer)),
        Some(denom) => {
            let denom: BigInt = denom
                .parse()
                .map_err(|_| bad("denominator is not an integer"))?;
            if denom.is_zero() {
                return Err(bad("denominator is zero"));
            }
            Ok(Rat::new(numer, denom))
        }
    }
}

/// Formats a rational in the same syntax `parse_rat` accepts.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact determinant of a small dense matrix, by Gaussian elimination with
/// exact pivoting. `m` must be square.
pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(r) => r,
            None => return Rat::zero(),
        };
        if pivot_row != col {
            a.swap(pivot_row, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &pivot;
            for k in col + 1..n {
                let sub = &factor * &a[col][k];
                a[row][k] -= sub;
            }
            a[row][col] = Rat::zero();
        }
    }
    det
}

/// Sign of the exact determinant.
pub fn det_sign_rat(m: &[Vec<Rat>]) -> Sign {
    Sign::of(&det_rat(m))
}

/// Unique exact solution of the square system `a x = b`, or `None` when the
/// matrix is singular.
pub fn solve_linear(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut aug = row.clone();
            aug.push(rhs.clone());
            aug
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, col);
        let pivot = m[col][col].clone();
        for k in col..=n {
            m[col][k] = &m[col][k] / &pivot;
        }
        for row in 0..n {
            if row == col || m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone();
            for k in col..=n {
                let sub = &factor * &m[col][k];
                m[row][k] -= sub;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Basis of the right kernel of an exact matrix whose rows have length
/// `width`. An empty row list yields the standard basis.
pub fn nullspace_basis(rows: &[Vec<Rat>], width: usize) -> Vec<Vec<Rat>> {
    debug_assert!(rows.iter().all(|row| row.len() == width));
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for col in 0..width {
        let rank = pivot_cols.len();
        let Some(pivot_row) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, rank);
        let pivot = m[rank][col].clone();
        for k in col..width {
            m[rank][k] = &m[rank][k] / &pivot;
        }
        for row in 0..nrows {
            if row == rank || m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone();
            for k in col..width {
                let sub = &factor * &m[rank][k];
                m[row][k] -= sub;
            }
        }
        pivot_cols.push(col);
    }
    let mut basis = Vec::new();
    for free in 0..width {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); width];
        v[free] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// `f64` determinant by cofactor expansion together with a conservative
/// absolute error bound. Intended for n <= 6; the bound grows as roughly
/// n * n! * eps * permanent(|m|), which stays sound for the matrix sizes the
/// predicates produce.
pub fn det_f64(m: &[Vec<f64>]) -> (f64, f64) {
    let n = m.len();
    if n == 0 {
        return (1.0, 0.0);
    }
    let value = det_f64_rec(m, &mut (0..n).collect::<Vec<_>>(), 0);
    let magnitude = perm_f64_rec(m, &mut (0..n).collect::<Vec<_>>(), 0);
    // Covers the expansion arithmetic plus the operand rounding (entries are
    // nearest-f64 images of exact rationals, often differences of two).
    let factor = ((n as f64) * 8.0 + 16.0) * f64::EPSILON;
    (value, magnitude * factor)
}

fn det_f64_rec(m: &[Vec<f64>], cols: &mut Vec<usize>, row: usize) -> f64 {
    let n = m.len();
    if row == n {
        return 1.0;
    }
    if cols.len() == 1 {
        return m[row][cols[0]];
    }
    let mut acc = 0.0;
    for i in 0..cols.len() {
        let c = cols.remove(i);
        let term = m[row][c] * det_f64_rec(m, cols, row + 1);
        acc += if i % 2 == 0 { term } else { -term };
        cols.insert(i, c);
    }
    acc
}

fn perm_f64_rec(m: &[Vec<f64>], cols: &mut Vec<usize>, row: usize) -> f64 {
    if cols.len() == 1 {
        return m[row][cols[0]].abs();
    }
    let mut acc = 0.0;
    for i in 0..cols.len() {
        let c = cols.remove(i);
        acc += m[row][c].abs() * perm_f64_rec(m, cols, row + 1);
        cols.insert(i, c);
    }
    acc
}

/// Exact dot product.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Float dot product with an absolute error bound.
pub fn dot_f64(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut value = 0.0;
    let mut magnitude = 0.0;
    for (x, y) in a.iter().zip(b) {
        value += x * y;
        magnitude += (x * y).abs();
    }
    // Covers both the accumulation error and the rounding already present in
    // the operands (nearest-f64 images of exact rationals).
    let factor = ((a.len().max(1) as f64) * 8.0 + 16.0) * f64::EPSILON;
    (value, magnitude * factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-17", "3/4", "-3/4", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // Reduction and sign normalization.
        assert_eq!(format_rat(&parse_rat("4/8").unwrap()), "1/2");
        assert_eq!(format_rat(&parse_rat("3/-4").unwrap()), "-3/4");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a").is_err());
        assert!(parse_rat("1.5").is_err());
    }

    #[test]
    fn det_rat_small_cases() {
        let id3: Vec<Vec<Rat>> = (0..3)
            .map(|i| (0..3).map(|j| rat((i == j) as i64)).collect())
            .collect();
        assert_eq!(det_rat(&id3), rat(1));

        let m = vec![vec![rat(1), rat(2)], vec![rat(3), rat(4)]];
        assert_eq!(det_rat(&m), rat(-2));

        let singular = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ];
        assert_eq!(det_rat(&singular), rat(0));
    }

    #[test]
    fn det_f64_filter_agrees_with_exact() {
        let m_rat = vec![
            vec![rat(3), rat(-1), rat(2)],
            vec![rat(0), rat(5), rat(1)],
            vec![rat(-2), rat(4), rat(7)],
        ];
        let m_f: Vec<Vec<f64>> = m_rat
            .iter()
            .map(|row| row.iter().map(to_f64).collect())
            .collect();
        let (value, err) = det_f64(&m_f);
        let exact = det_rat(&m_rat);
        assert!(err < 1e-10);
        assert!((value - to_f64(&exact)).abs() <= err);
        assert_eq!(
            Sign::of_f64_filtered(value, err),
            Some(Sign::of(&exact))
        );
    }

    #[test]
    fn filter_declines_near_zero() {
        assert_eq!(Sign::of_f64_filtered(1e-18, 1e-15), None);
        assert_eq!(Sign::of_f64_filtered(f64::NAN, 0.0), None);
        assert_eq!(Sign::of_f64_filtered(-1.0, 0.5), Some(Sign::Neg));
    }

    #[test]
    fn dyadic_values() {
        assert_eq!(dyadic(3, 2), ratio(3, 4));
        assert_eq!(dyadic(-1, 40), ratio(-1, 1 << 40));
    }

    #[test]
    fn solve_linear_unique_and_singular() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(-1)]];
        let b = vec![rat(7), rat(-1)];
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x, vec![rat(2), rat(3)]);
        for (row, rhs) in a.iter().zip(&b) {
            assert_eq!(dot(row, &x), rhs.clone());
        }

        let singular = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert!(solve_linear(&singular, &b).is_none());

        let one = vec![vec![ratio(3, 4)]];
        assert_eq!(solve_linear(&one, &[rat(6)]).unwrap(), vec![rat(8)]);
    }

    #[test]
    fn nullspace_spans_the_kernel() {
        // Rank-1 matrix in width 3: kernel has dimension 2.
        let rows = vec![vec![rat(1), rat(1), rat(1)], vec![rat(2), rat(2), rat(2)]];
        let basis = nullspace_basis(&rows, 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for row in &rows {
                assert!(dot(row, v).is_zero());
            }
        }
        // Basis vectors are independent: each has a coordinate the other lacks.
        assert!(basis[0] != basis[1]);

        // No rows: the kernel is everything.
        let full = nullspace_basis(&[], 2);
        assert_eq!(full.len(), 2);

        // Full rank: the kernel is trivial.
        let rank2 = vec![vec![rat(1), rat(0)], vec![rat(1), rat(1)]];
        assert!(nullspace_basis(&rank2, 2).is_empty());
    }
}
