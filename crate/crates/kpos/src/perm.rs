//! Permutations in one-line notation, Bruhat order, reduced words and the
//! Demazure (0-Hecke) product.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation of 1..={0}")]
    NotBijection(usize),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("simple reflection index {index} out of range for n = {n}")]
    BadIndex { index: usize, n: usize },
}

/// `w(a) = one_line[a - 1]`, values 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;
    fn try_from(v: Vec<usize>) -> Result<Self, PermError> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl Permutation {
    pub fn new(one_line: Vec<usize>) -> Result<Self, PermError> {
        let n = one_line.len();
        let mut seen = vec![false; n + 1];
        for &v in &one_line {
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotBijection(n));
            }
            seen[v] = true;
        }
        Ok(Permutation(one_line))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i - 1, i);
        p
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    pub fn at(&self, a: usize) -> usize {
        self.0[a - 1]
    }

    /// `(self ∘ other)(a) = self(other(a))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&a| self.at(a)).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (a, &v) in self.0.iter().enumerate() {
            inv[v - 1] = a + 1;
        }
        Permutation(inv)
    }

    /// `self ∘ s_i`: swaps positions `i` and `i+1`.
    pub fn times_simple(&self, i: usize) -> Permutation {
        let mut p = self.clone();
        p.0.swap(i - 1, i);
        p
    }

    /// `s_i ∘ self`: swaps the values `i` and `i+1`.
    pub fn simple_times(&self, i: usize) -> Permutation {
        Permutation(
            self.0
                .iter()
                .map(|&v| if v == i { i + 1 } else if v == i + 1 { i } else { v })
                .collect(),
        )
    }

    pub fn length(&self) -> usize {
        let mut inv = 0;
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                if self.0[a] > self.0[b] {
                    inv += 1;
                }
            }
        }
        inv
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(a, &v)| a + 1 == v)
    }

    /// `w[i, j] = |{a <= i : w(a) >= j}|`.
    pub fn rank_count(&self, i: usize, j: usize) -> usize {
        self.0[..i].iter().filter(|&&v| v >= j).count()
    }

    pub fn is_right_descent(&self, i: usize) -> bool {
        self.at(i) > self.at(i + 1)
    }

    pub fn is_left_descent(&self, i: usize) -> bool {
        let inv = self.inverse();
        inv.at(i) > inv.at(i + 1)
    }

    /// Lexicographically least reduced word, as indices of simple reflections.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(w.length());
        while let Some(i) = (1..w.n()).find(|&i| w.is_left_descent(i)) {
            word.push(i);
            w = w.simple_times(i);
        }
        word
    }

    pub fn from_word(n: usize, word: &[usize]) -> Result<Permutation, PermError> {
        let mut p = Self::identity(n);
        for &i in word {
            if i == 0 || i >= n {
                return Err(PermError::BadIndex { index: i, n });
            }
            p = p.times_simple(i);
        }
        Ok(p)
    }

    /// `w * s_i` in the 0-Hecke monoid.
    pub fn demazure_step(&self, i: usize) -> Permutation {
        if self.at(i) < self.at(i + 1) {
            self.times_simple(i)
        } else {
            self.clone()
        }
    }

    pub fn demazure(n: usize, word: &[usize]) -> Permutation {
        word.iter().fold(Self::identity(n), |w, &i| w.demazure_step(i))
    }

    /// Longest element of the parabolic subgroup generated by `s_i..s_{j-1}`,
    /// i.e. the reversal of the window `[i, j]`.
    pub fn longest_on(n: usize, i: usize, j: usize) -> Permutation {
        let mut p = Self::identity(n);
        p.0[i - 1..j].reverse();
        p
    }

    pub fn longest(n: usize) -> Permutation {
        Self::longest_on(n, 1, n)
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 1..=n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    /// Permutations whose reduced words use only `s_lo..s_hi`.
    pub fn parabolic(n: usize, lo: usize, hi: usize) -> Vec<Permutation> {
        Self::all(n)
            .into_iter()
            .filter(|p| p.reduced_word().iter().all(|&i| (lo..=hi).contains(&i)))
            .collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn bruhat_leq(x: &Permutation, y: &Permutation) -> Result<bool, PermError> {
    if x.n() != y.n() {
        return Err(PermError::SizeMismatch(x.n(), y.n()));
    }
    let n = x.n();
    for i in 1..=n {
        for j in 1..=n {
            if x.rank_count(i, j) > y.rank_count(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A pair `(u, v)` naming a double Bruhat cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BruhatPair {
    pub u: Permutation,
    pub v: Permutation,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn words_and_lengths() {
        let w0 = Permutation::longest(4);
        assert_eq!(w0.length(), 6);
        assert_eq!(Permutation::from_word(4, &w0.reduced_word()).unwrap(), w0);
        for w in Permutation::all(4) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length());
            assert_eq!(Permutation::from_word(4, &word).unwrap(), w);
        }
        assert_eq!(Permutation::simple(3, 1).times_simple(2), p(&[2, 3, 1]));
    }

    #[test]
    fn bruhat_small() {
        let s1 = Permutation::simple(3, 1);
        let s2 = Permutation::simple(3, 2);
        assert!(bruhat_leq(&s1, &s1.times_simple(2)).unwrap());
        assert!(!bruhat_leq(&s1, &s2).unwrap());
        for w in Permutation::all(3) {
            assert!(bruhat_leq(&Permutation::identity(3), &w).unwrap());
        }
    }

    #[test]
    fn demazure_absorbs() {
        assert_eq!(Permutation::demazure(3, &[1, 1]), Permutation::simple(3, 1));
        assert_eq!(Permutation::demazure(3, &[1, 2, 1, 2]), Permutation::longest(3));
    }

    #[test]
    fn parabolic_sizes() {
        assert_eq!(Permutation::parabolic(4, 1, 2).len(), 6);
        assert_eq!(Permutation::longest_on(4, 1, 3), p(&[3, 2, 1, 4]));
        assert!(p(&[2, 1]).is_left_descent(1));
        assert!(Permutation::new(vec![1, 1]).is_err());
    }
}
