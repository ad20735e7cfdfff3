//! k-nonnegativity and k-positivity predicates.

use num::{Signed, Zero};
use thiserror::Error;

use crate::exact::{IndexSet, Matrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PositivityError {
    #[error("k = {k} outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("the column-solid test needs an invertible matrix")]
    Singular,
}

/// A minor that breaks the tested condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorWitness {
    pub rows: IndexSet,
    pub cols: IndexSet,
    pub value: Rational,
}

impl std::fmt::Display for MinorWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "I={} J={} value={}", self.rows, self.cols, crate::exact::format_rational(&self.value))
    }
}

/// `Ok(())` when the predicate holds, `Err(witness)` otherwise.
pub type Verdict = Result<(), MinorWitness>;

fn check_k(m: &Matrix, k: usize) -> Result<usize, PositivityError> {
    if !m.is_square() {
        return Err(PositivityError::NotSquare);
    }
    let n = m.n();
    if k == 0 || k > n {
        return Err(PositivityError::KOutOfRange { k, n });
    }
    Ok(n)
}

/// Scan minors by increasing order, then lexicographically in (I, J);
/// return the first one failing `ok`.
fn scan<F>(m: &Matrix, k: usize, col_sets: impl Fn(usize, usize) -> Vec<IndexSet>, ok: F) -> Verdict
where
    F: Fn(&Rational) -> bool,
{
    let n = m.n();
    for r in 1..=k {
        let rows = IndexSet::subsets(n, r);
        let cols = col_sets(n, r);
        for i in &rows {
            for j in &cols {
                let v = m.minor(i, j).expect("indices in range");
                if !ok(&v) {
                    return Err(MinorWitness { rows: i.clone(), cols: j.clone(), value: v });
                }
            }
        }
    }
    Ok(())
}

/// All minors of order at most `k` are nonnegative.
pub fn is_k_nonnegative(m: &Matrix, k: usize) -> Result<Verdict, PositivityError> {
    check_k(m, k)?;
    Ok(scan(m, k, IndexSet::subsets, |v| !v.is_negative()))
}

/// Column-solid minors only; valid for invertible input.
pub fn is_k_nonnegative_fast(m: &Matrix, k: usize) -> Result<Verdict, PositivityError> {
    check_k(m, k)?;
    if m.det().expect("square").is_zero() {
        return Err(PositivityError::Singular);
    }
    Ok(scan(m, k, IndexSet::intervals, |v| !v.is_negative()))
}

pub fn is_k_positive(m: &Matrix, k: usize) -> Result<Verdict, PositivityError> {
    check_k(m, k)?;
    Ok(scan(m, k, IndexSet::subsets, |v| v.is_positive()))
}

/// The largest `k` for which `m` is k-nonnegative (0 if some entry is negative).
pub fn nonnegativity_order(m: &Matrix) -> usize {
    let n = m.n();
    (1..=n).take_while(|&k| is_k_nonnegative(m, k).expect("k in range").is_ok()).last().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroViolation {
    /// A zero on the diagonal.
    DiagonalZero { i: usize },
    /// `m[i][j] = 0` above the diagonal but `m[i2][j2] != 0` to its northeast.
    NorthEast { zero: (usize, usize), nonzero: (usize, usize) },
    /// `m[i][j] = 0` below the diagonal but `m[i2][j2] != 0` to its southwest.
    SouthWest { zero: (usize, usize), nonzero: (usize, usize) },
    /// A zero whose diagonal neighbour must also vanish for an irreducible matrix.
    Diagonal { zero: (usize, usize), nonzero: (usize, usize) },
}

/// Zero-pattern checks for a k-nonnegative invertible matrix (`k >= 2`).
/// The diagonal propagation rules apply only when `irreducible` is set and `k > 2`.
pub fn zero_pattern_violations(m: &Matrix, k: usize, irreducible: bool) -> Vec<ZeroViolation> {
    let n = m.n();
    let z = |i: usize, j: usize| m.get(i, j).is_zero();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if !z(i, j) {
                continue;
            }
            if i == j {
                out.push(ZeroViolation::DiagonalZero { i });
            } else if i < j {
                for i2 in 1..=i {
                    for j2 in j..=n {
                        if !z(i2, j2) {
                            out.push(ZeroViolation::NorthEast { zero: (i, j), nonzero: (i2, j2) });
                        }
                    }
                }
            } else {
                for i2 in i..=n {
                    for j2 in 1..=j {
                        if !z(i2, j2) {
                            out.push(ZeroViolation::SouthWest { zero: (i, j), nonzero: (i2, j2) });
                        }
                    }
                }
            }
            if irreducible && k > 2 {
                if (i <= k || j <= k) && i > 1 && j > 1 && !z(i - 1, j - 1) {
                    out.push(ZeroViolation::Diagonal { zero: (i, j), nonzero: (i - 1, j - 1) });
                }
                if (i + k > n || j + k > n) && i < n && j < n && !z(i + 1, j + 1) {
                    out.push(ZeroViolation::Diagonal { zero: (i, j), nonzero: (i + 1, j + 1) });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, Matrix};

    #[test]
    fn ones_matrix() {
        let m = Matrix::from_ints(&[&[1, 1], &[1, 1]]);
        assert!(is_k_positive(&m, 1).unwrap().is_ok());
        assert!(is_k_positive(&m, 2).unwrap().is_err());
    }

    #[test]
    fn identity_is_not_positive() {
        let i3 = Matrix::identity(3);
        assert!(is_k_nonnegative(&i3, 3).unwrap().is_ok());
        let w = is_k_positive(&i3, 2).unwrap().unwrap_err();
        assert_eq!(w.value, int(0));
    }

    #[test]
    fn k_range() {
        assert!(is_k_nonnegative(&Matrix::identity(3), 0).is_err());
        assert!(is_k_nonnegative(&Matrix::identity(3), 4).is_err());
    }

    #[test]
    fn fast_rejects_singular() {
        let m = Matrix::from_ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(is_k_nonnegative_fast(&m, 1), Err(PositivityError::Singular));
    }

    #[test]
    fn zero_patterns() {
        let m = Matrix::from_ints(&[&[0, 1], &[1, 1]]);
        assert!(zero_pattern_violations(&m, 2, false).contains(&ZeroViolation::DiagonalZero { i: 1 }));
        let m = Matrix::from_ints(&[&[1, 0, 1], &[1, 1, 1], &[0, 1, 1]]);
        let v = zero_pattern_violations(&m, 2, false);
        assert!(v.contains(&ZeroViolation::NorthEast { zero: (1, 2), nonzero: (1, 3) }));
        assert!(zero_pattern_violations(&Matrix::identity(3), 2, false).is_empty());
    }
}
