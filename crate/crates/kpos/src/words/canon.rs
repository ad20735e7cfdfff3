//! Structural canonical forms: every word is sent to the word naming the
//! cell that contains all of its evaluations.

use serde::{Deserialize, Serialize};

use super::{Letter, Mode, Word, WordError};
use crate::cells::{absorbed_prefix, e_letters, is_absorbed, k_word, t_word, tnn_word_n1, Lambda};
use crate::perm::Permutation;

/// Fine cells keep the three T-branches apart; coarse cells merge the
/// pattern `e(n-1) e(n-2) T` with the TNN cells it reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    #[default]
    Fine,
    Coarse,
}

impl std::str::FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fine" => Ok(Granularity::Fine),
            "coarse" => Ok(Granularity::Coarse),
            other => Err(format!("unknown granularity `{other}`")),
        }
    }
}

fn dem(n: usize, idx: impl IntoIterator<Item = usize>) -> Permutation {
    Permutation::demazure(n, &idx.into_iter().collect::<Vec<_>>())
}

/// Move letters right of K to its left.
fn through_k(n: usize, l: Letter) -> Letter {
    match l {
        Letter::E(1) => Letter::F(1),
        Letter::E(j) => Letter::E(j - 1),
        Letter::F(i) if i == n - 1 => Letter::E(n - 1),
        Letter::F(i) => Letter::F(i + 1),
        other => other,
    }
}

fn through_t(n: usize, l: Letter) -> Letter {
    match l {
        Letter::E(1) => Letter::E(n - 2),
        Letter::E(2) => Letter::E(n - 1),
        Letter::E(j) => Letter::E(j - 2),
        other => other,
    }
}

fn canon_s(n: usize, letters: &[Letter]) -> Vec<Letter> {
    let gpos = letters.iter().position(|l| *l == Letter::K);
    let Some(p) = gpos else {
        let u = dem(n, letters.iter().filter_map(|l| if let Letter::F(i) = l { Some(*i) } else { None }));
        let v = dem(n, letters.iter().filter_map(|l| if let Letter::E(i) = l { Some(*i) } else { None }));
        return tnn_word_n1(&u, &v);
    };
    let mut front: Vec<Letter> = letters[..p].to_vec();
    front.extend(letters[p + 1..].iter().map(|l| through_k(n, *l)));
    let e_last = front.contains(&Letter::E(n - 1));
    let f1 = front.contains(&Letter::F(1));
    let omega = dem(n, front.iter().filter_map(|l| match l {
        Letter::E(i) if *i != n - 1 => Some(*i),
        _ => None,
    }));
    let sigma = dem(n, front.iter().filter_map(|l| match l {
        Letter::F(i) if *i != 1 => Some(*i),
        _ => None,
    }));
    k_word(&sigma, &omega, f1, e_last)
}

fn canon_t(n: usize, letters: &[Letter], g: Granularity) -> Result<Vec<Letter>, WordError> {
    let idx = |l: &Letter| if let Letter::E(i) = l { Some(*i) } else { None };
    let Some(p) = letters.iter().position(|l| *l == Letter::T) else {
        let w = dem(n, letters.iter().filter_map(idx));
        if g == Granularity::Coarse && is_absorbed(&w) {
            let wp = absorbed_prefix(&w).expect("absorbed cells factor through the corner");
            return Ok(t_word(&wp, Lambda::LastSecond));
        }
        return Ok(e_letters(&w));
    };
    let mut front: Vec<usize> = letters[..p].iter().filter_map(idx).collect();
    front.extend(letters[p + 1..].iter().map(|l| through_t(n, *l)).filter_map(|l| idx(&l)));
    let wp = dem(n, front.iter().copied().filter(|&i| i + 3 <= n));
    let corner = dem(n, front.iter().copied().filter(|&i| i + 2 >= n));
    let word = corner.reduced_word();
    let lambda = match word.as_slice() {
        [] => Lambda::Bare,
        [a] if *a == n - 2 => Lambda::Second,
        [_] => Lambda::Last,
        [a, _] if *a == n - 2 => match g {
            Granularity::Fine => Lambda::SecondLast,
            Granularity::Coarse => Lambda::LastSecond,
        },
        _ => match g {
            Granularity::Fine => return Err(WordError::CellSplitRequired),
            Granularity::Coarse => Lambda::LastSecond,
        },
    };
    Ok(t_word(&wp, lambda))
}

/// The canonical word of the cell holding the word's evaluations.
/// Words in 𝕊 always name their h letters in the result.
pub fn canonicalize(word: &Word, g: Granularity) -> Result<Word, WordError> {
    if word.generator_count() > 1 {
        return Err(WordError::TwoGenerators);
    }
    let n = word.n;
    let stripped = word.without_h();
    let letters = match word.mode {
        Mode::S => canon_s(n, &stripped.letters),
        Mode::T => canon_t(n, &stripped.letters, g)?,
    };
    Word::new(n, word.mode, letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize, mode: Mode, text: &str, g: Granularity) -> String {
        canonicalize(&Word::parse(n, mode, text).unwrap(), g).unwrap().to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(c(3, Mode::S, "K e2", Granularity::Fine), "h2 h3 e1 K");
        assert_eq!(c(3, Mode::S, "e1 K", Granularity::Fine), "h2 h3 e1 K");
        assert_eq!(c(3, Mode::S, "e2 e2 K f2", Granularity::Fine), "h2 h3 e2 K");
        assert_eq!(c(3, Mode::S, "e1 e1 f2", Granularity::Fine), "f2 h1 h2 h3 e1");
        assert_eq!(c(4, Mode::T, "T e1", Granularity::Fine), "e2 T");
        assert_eq!(c(4, Mode::T, "e2 e3 T", Granularity::Fine), "e2 e3 T");
        assert_eq!(c(4, Mode::T, "e2 e3 T", Granularity::Coarse), "e3 e2 T");
        let w = Word::parse(4, Mode::T, "e3 e2 T").unwrap();
        assert_eq!(canonicalize(&w, Granularity::Fine), Err(WordError::CellSplitRequired));
        let two = Word::parse(3, Mode::S, "K K").unwrap();
        assert_eq!(canonicalize(&two, Granularity::Fine), Err(WordError::TwoGenerators));
    }
}
