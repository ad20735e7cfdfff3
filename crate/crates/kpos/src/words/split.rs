//! The three-way split of `e(n-1)(u) e(n-2)(v) T(a, b)` by the sign of the
//! upper-right minor of order n-1.

use std::cmp::Ordering;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Letter, Mode, ParamWord, Word, WordError};
use crate::exact::Rational;
use crate::generators::{Family, GeneratorParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitBranch {
    Neg,
    Zero,
    Pos,
}

/// Sign of `uv - b(n-2) Y`, which is the sign of the upper-right minor.
pub fn split_branch(u: &Rational, v: &Rational, p: &GeneratorParams) -> SplitBranch {
    let lhs = u * v;
    let rhs = p.b.last().expect("T has b parameters") * p.y();
    match lhs.cmp(&rhs) {
        Ordering::Less => SplitBranch::Neg,
        Ordering::Equal => SplitBranch::Zero,
        Ordering::Greater => SplitBranch::Pos,
    }
}

pub fn cell_split(u: &Rational, v: &Rational, p: &GeneratorParams) -> Result<(SplitBranch, ParamWord), WordError> {
    if p.family != Family::T {
        return Err(WordError::BadDocument("cell_split takes T parameters".into()));
    }
    if !u.is_positive() || !v.is_positive() {
        return Err(WordError::NonPositive);
    }
    let n = p.n;
    let (x, y) = (p.x(), p.y());
    let bl = p.b[n - 3].clone(); // b(n-2)
    let branch = split_branch(u, v, p);
    let pw = match branch {
        SplitBranch::Neg => {
            let u2 = u * (&y + v * &x) / &y;
            let mut b = p.b.clone();
            b[n - 3] = &bl - u * v / &y;
            let word = Word::new(n, Mode::T, vec![Letter::E(n - 2), Letter::E(n - 1), Letter::T])?;
            let mut params = vec![v.clone(), u2];
            params.extend(p.a.iter().cloned());
            params.extend(b);
            ParamWord::new(word, params)?
        }
        SplitBranch::Zero => {
            // e(n-2)(v) e(n-3)(a(n-3))..e1(a1) e(n-1)(b(n-2)X + u) e(n-2)(b(n-3))..e2(b1)
            let mut letters = vec![Letter::E(n - 2)];
            let mut params = vec![v.clone()];
            for i in (1..=n - 3).rev() {
                letters.push(Letter::E(i));
                params.push(p.a[i - 1].clone());
            }
            letters.push(Letter::E(n - 1));
            params.push(&bl * &x + u);
            for i in (1..=n - 3).rev() {
                letters.push(Letter::E(i + 1));
                params.push(p.b[i - 1].clone());
            }
            ParamWord::new(Word::new(n, Mode::T, letters)?, params)?
        }
        SplitBranch::Pos => {
            let v2 = &bl * (&y + v * &x) / (&bl * &x + u);
            let m = n - 3;
            // bb[i] = B_i for i in 0..=m, aa[i] = A_i for i in 1..=m
            let mut bb = vec![Rational::zero(); m + 1];
            let mut aa = vec![Rational::zero(); m + 1];
            bb[m] = &p.b[m - 1] + v - &v2;
            for i in (1..=m).rev() {
                if bb[i].is_zero() {
                    return Err(WordError::DomainViolation);
                }
                aa[i] = &p.a[i - 1] * &p.b[i - 1] / &bb[i];
                let prev_b = if i >= 2 { p.b[i - 2].clone() } else { Rational::zero() };
                bb[i - 1] = &p.a[i - 1] + prev_b - &aa[i];
            }
            let mut letters = vec![Letter::E(n - 2)];
            let mut params = vec![v2];
            for i in (1..=m).rev() {
                letters.push(Letter::E(i));
                params.push(aa[i].clone());
            }
            letters.push(Letter::E(n - 1));
            params.push(&bl * &x + u);
            for i in (0..=m).rev() {
                letters.push(Letter::E(i + 1));
                params.push(bb[i].clone());
            }
            ParamWord::new(Word::new(n, Mode::T, letters)?, params).map_err(|_| WordError::DomainViolation)?
        }
    };
    Ok((branch, pw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::generators::chevalley_any;
    use crate::generators::Chevalley::E;

    fn lhs(u: &Rational, v: &Rational, p: &GeneratorParams) -> crate::exact::Matrix {
        let n = p.n;
        chevalley_any(n, E, n - 1, u).times(&chevalley_any(n, E, n - 2, v)).times(&p.matrix())
    }

    #[test]
    fn three_branches_n4() {
        let p = GeneratorParams::t(4, vec![int(1)], vec![int(1), int(1)]).unwrap();
        for (u, v, want) in [
            (int(1), int(1), SplitBranch::Zero),
            (rat(1, 2), rat(1, 2), SplitBranch::Neg),
            (int(2), int(2), SplitBranch::Pos),
        ] {
            let (branch, pw) = cell_split(&u, &v, &p).unwrap();
            assert_eq!(branch, want);
            assert_eq!(pw.evaluate(), lhs(&u, &v, &p));
        }
        let (_, neg) = cell_split(&rat(1, 2), &rat(1, 2), &p).unwrap();
        assert_eq!(neg.params.last().unwrap(), &rat(3, 4));
        let (_, pos) = cell_split(&int(2), &int(2), &p).unwrap();
        assert_eq!(pos.params[0], int(1));
    }
}
