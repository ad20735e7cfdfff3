//! Bruhat cells: NE/SW ranks, classification of matrices into the cells of
//! the two semigroups, peeling, factorization and sampling.

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{sign, IndexSet, Matrix, Rational};
use crate::generators::{read_off_k, read_off_t, Chevalley};
use crate::perm::{bruhat_leq, Permutation};
use crate::positivity::is_k_nonnegative;
use crate::random::{positives, Prng};
use crate::words::{canonicalize, solve, Granularity, Letter, Mode, ParamWord, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CellError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not in the semigroup: {0}")]
    NotInSemigroup(String),
    #[error("weak-order division failed: {0}")]
    Division(String),
    #[error("residue not recognized as diagonal, K or T")]
    Residue,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("size {n} below the minimum {min} for this mode")]
    TooSmall { n: usize, min: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellMode {
    N1,
    N2U,
}

impl CellMode {
    pub fn word_mode(self) -> Mode {
        match self {
            CellMode::N1 => Mode::S,
            CellMode::N2U => Mode::T,
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            CellMode::N1 => 3,
            CellMode::N2U => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Largest `x` such that removing the generator keeps every minor of order
/// at most `k` nonnegative, and the matrix with it removed. Only solid
/// minors through the touched row (column) are consulted. `None` when no
/// minor bounds `x`, which cannot happen for invertible input.
pub fn peel_chevalley(m: &Matrix, side: Side, kind: Chevalley, i: usize, k: usize) -> Option<(Rational, Matrix)> {
    let n = m.n();
    if i == 0 || i >= n {
        return None;
    }
    let mut best: Option<Rational> = None;
    let mut consider = |a: Rational, b: Rational| {
        if b.is_positive() {
            let r = a / b;
            if best.as_ref().is_none_or(|x| r < *x) {
                best = Some(r);
            }
        }
    };
    // (solid set through the touched index, the set with it swapped)
    let mut pairs: Vec<(IndexSet, IndexSet)> = Vec::new();
    match (side, kind) {
        (Side::Left, Chevalley::E) | (Side::Right, Chevalley::F) => {
            for h in (1..=i).rev().take(k) {
                let s = IndexSet::interval(h, i);
                let b = s.swap_index(i, i + 1);
                pairs.push((s, b));
            }
        }
        (Side::Left, Chevalley::F) | (Side::Right, Chevalley::E) => {
            for h in (i + 1..=n).take(k) {
                let s = IndexSet::interval(i + 1, h);
                let b = s.swap_index(i + 1, i);
                pairs.push((s, b));
            }
        }
    }
    for (s, b) in &pairs {
        for other in IndexSet::subsets(n, s.len()) {
            let (a, bb) = match side {
                Side::Left => (m.minor(s, &other), m.minor(b, &other)),
                Side::Right => (m.minor(&other, s), m.minor(&other, b)),
            };
            consider(a.ok()?, bb.ok()?);
        }
    }
    let x = best?;
    let mut out = m.clone();
    let neg = -x.clone();
    match (side, kind) {
        (Side::Left, Chevalley::E) => out.add_row(i, i + 1, &neg),
        (Side::Left, Chevalley::F) => out.add_row(i + 1, i, &neg),
        (Side::Right, Chevalley::E) => out.add_col(i + 1, i, &neg),
        (Side::Right, Chevalley::F) => out.add_col(i, i + 1, &neg),
    }
    Some((x, out))
}

/// `rank M_{[1,i],[j,n]}`.
fn ne_rank(m: &Matrix, i: usize, j: usize) -> usize {
    let n = m.n();
    if i == 0 || j > n {
        return 0;
    }
    m.submatrix(&IndexSet::interval(1, i), &IndexSet::interval(j, n)).expect("in range").rank()
}

/// The permutation `w` with `M` in `B- w B-`, read off the northeast ranks.
pub fn ne_bounded_cell(m: &Matrix) -> Result<Permutation, CellError> {
    let n = m.n();
    if m.det().map_err(|_| CellError::Singular)?.is_zero() {
        return Err(CellError::Singular);
    }
    let mut r = vec![vec![0usize; n + 2]; n + 1];
    for (i, row) in r.iter_mut().enumerate().skip(1) {
        for (j, slot) in row.iter_mut().enumerate().take(n + 1).skip(1) {
            *slot = ne_rank(m, i, j);
        }
    }
    let mut w = vec![0usize; n];
    for i in 1..=n {
        for j in 1..=n {
            let p = r[i][j] + r[i - 1][j + 1];
            let q = r[i - 1][j] + r[i][j + 1];
            if p == q + 1 {
                w[j - 1] = i;
            }
        }
    }
    Permutation::new(w).map_err(|_| CellError::Singular)
}

/// Southwest analogue: `M` in `B+ u B+`.
pub fn sw_bounded_cell(m: &Matrix) -> Result<Permutation, CellError> {
    Ok(ne_bounded_cell(&m.transpose())?.inverse())
}

pub fn bruhat_pair_of(m: &Matrix) -> Result<crate::perm::BruhatPair, CellError> {
    Ok(crate::perm::BruhatPair { u: sw_bounded_cell(m)?, v: ne_bounded_cell(m)? })
}

/// `M` is w-NE-bounded: its northeast ranks are exactly those of `w`.
pub fn is_ne_bounded(m: &Matrix, w: &Permutation) -> bool {
    let n = m.n();
    (1..=n).all(|i| (1..=n).all(|j| ne_rank(m, i, j) == (j..=n).filter(|&a| w.at(a) <= i).count()))
}

/// `s_{n-1} ... s_1`, one-line `[n, 1, ..., n-1]`.
pub fn alpha_n1(n: usize) -> Permutation {
    Permutation::from_word(n, &(1..n).rev().collect::<Vec<_>>()).expect("valid")
}

/// `s_1 ... s_{n-1}`.
pub fn alpha_bar_n1(n: usize) -> Permutation {
    Permutation::from_word(n, &(1..n).collect::<Vec<_>>()).expect("valid")
}

/// `(n-2)...(1)(n-1)...(1)`.
pub fn alpha_n2(n: usize) -> Permutation {
    let mut w: Vec<usize> = (1..=n - 2).rev().collect();
    w.extend((1..n).rev());
    Permutation::from_word(n, &w).expect("valid")
}

/// `(n-2)...(1)(n-1)...(2)`.
pub fn beta_n2(n: usize) -> Permutation {
    let mut w: Vec<usize> = (1..=n - 2).rev().collect();
    w.extend((2..n).rev());
    Permutation::from_word(n, &w).expect("valid")
}

/// `w = q ∘ d` with lengths adding; returns `q`.
pub fn right_divide(w: &Permutation, d: &Permutation) -> Option<Permutation> {
    let q = w.compose(&d.inverse());
    (q.length() + d.length() == w.length()).then_some(q)
}

pub fn e_letters(w: &Permutation) -> Vec<Letter> {
    w.reduced_word().into_iter().map(Letter::E).collect()
}

pub fn f_letters(w: &Permutation) -> Vec<Letter> {
    w.reduced_word().into_iter().map(Letter::F).collect()
}

/// Canonical words, shared with the word canonicalizer.
pub fn tnn_word_n1(u: &Permutation, v: &Permutation) -> Vec<Letter> {
    let n = u.n();
    let mut out = f_letters(u);
    out.extend((1..=n).map(Letter::H));
    out.extend(e_letters(v));
    out
}

pub fn k_word(sigma: &Permutation, omega: &Permutation, f1: bool, e_last: bool) -> Vec<Letter> {
    let n = sigma.n();
    let mut out = f_letters(sigma);
    out.extend((2..=n).map(Letter::H));
    out.extend(e_letters(omega));
    if f1 {
        out.push(Letter::F(1));
    }
    if e_last {
        out.push(Letter::E(n - 1));
    }
    out.push(Letter::K);
    out
}

/// Which of the letters `e(n-2)`, `e(n-1)` precede T.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lambda {
    Bare,
    Second,
    Last,
    SecondLast,
    LastSecond,
}

impl Lambda {
    pub fn letters(self, n: usize) -> Vec<Letter> {
        match self {
            Lambda::Bare => vec![],
            Lambda::Second => vec![Letter::E(n - 2)],
            Lambda::Last => vec![Letter::E(n - 1)],
            Lambda::SecondLast => vec![Letter::E(n - 2), Letter::E(n - 1)],
            Lambda::LastSecond => vec![Letter::E(n - 1), Letter::E(n - 2)],
        }
    }

    pub fn all(g: Granularity) -> [Lambda; 4] {
        match g {
            Granularity::Fine => [Lambda::Bare, Lambda::Last, Lambda::Second, Lambda::SecondLast],
            Granularity::Coarse => [Lambda::Bare, Lambda::Last, Lambda::Second, Lambda::LastSecond],
        }
    }
}

pub fn t_word(w_prime: &Permutation, lambda: Lambda) -> Vec<Letter> {
    let n = w_prime.n();
    let mut out = e_letters(w_prime);
    out.extend(lambda.letters(n));
    out.push(Letter::T);
    out
}

/// Invariants read from minors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub u: Permutation,
    pub v: Permutation,
    pub det_sign: i32,
    pub corner_flags: [bool; 2],
}

/// A cell: its canonical word plus the signature of a representative.
/// Equality is by mode and word.
#[derive(Debug, Clone)]
pub struct CellId {
    pub mode: CellMode,
    pub word: Word,
    pub signature: Signature,
}

impl PartialEq for CellId {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode && self.word == other.word
    }
}

impl Eq for CellId {}

impl std::hash::Hash for CellId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mode.hash(state);
        self.word.hash(state);
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.letters.is_empty() {
            write!(f, "{:?}: (empty)", self.mode)
        } else {
            write!(f, "{:?}: {}", self.mode, self.word)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CellDoc {
    mode: CellMode,
    n: usize,
    word: Vec<String>,
    signature: Signature,
}

impl Serialize for CellId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CellDoc { mode: self.mode, n: self.word.n, word: self.word.tokens(), signature: self.signature.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CellId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = CellDoc::deserialize(d)?;
        let word = Word::parse(doc.n, doc.mode.word_mode(), &doc.word.join(" ")).map_err(serde::de::Error::custom)?;
        Ok(CellId { mode: doc.mode, word, signature: doc.signature })
    }
}

impl CellId {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn n(&self) -> usize {
        self.word.n
    }

    pub fn has_generator(&self) -> bool {
        self.word.generator_count() > 0
    }
}

fn principal_flags(m: &Matrix) -> [bool; 2] {
    let n = m.n();
    [!m.solid_minor(1, n - 1, 1, n - 1).is_zero(), !m.solid_minor(2, n, 2, n).is_zero()]
}

fn upper_flags(m: &Matrix) -> [bool; 2] {
    let n = m.n();
    [!m.solid_minor(1, n - 2, 2, n - 1).is_zero(), !m.solid_minor(2, n - 1, 3, n).is_zero()]
}

/// Assign a matrix of the semigroup to its cell.
pub fn classify(m: &Matrix, mode: CellMode, g: Granularity) -> Result<CellId, CellError> {
    let n = m.n();
    if !m.is_square() {
        return Err(CellError::NotInSemigroup("not square".into()));
    }
    if n < mode.min_n() {
        return Err(CellError::TooSmall { n, min: mode.min_n() });
    }
    let det = m.det().expect("square");
    if det.is_zero() {
        return Err(CellError::Singular);
    }
    let mk = |letters: Vec<Letter>, signature: Signature| -> Result<CellId, CellError> {
        Ok(CellId { mode, word: Word::new(n, mode.word_mode(), letters)?, signature })
    };
    match mode {
        CellMode::N1 => {
            if let Err(w) = is_k_nonnegative(m, n - 1).expect("k in range") {
                return Err(CellError::NotInSemigroup(format!("negative minor {w}")));
            }
            let u = sw_bounded_cell(m)?;
            let v = ne_bounded_cell(m)?;
            let flags = principal_flags(m);
            let signature = Signature { u: u.clone(), v: v.clone(), det_sign: sign(&det), corner_flags: flags };
            if det.is_positive() {
                return mk(tnn_word_n1(&u, &v), signature);
            }
            let omega = right_divide(&v, &alpha_n1(n))
                .filter(|w| w.at(n) == n)
                .ok_or_else(|| CellError::Division(format!("v = {v}")))?;
            let sigma = right_divide(&u, &alpha_bar_n1(n))
                .filter(|w| w.at(1) == 1)
                .ok_or_else(|| CellError::Division(format!("u = {u}")))?;
            // e(n-1) shows in the [1,n-1] minor and f1 in the [2,n] minor
            mk(k_word(&sigma, &omega, flags[1], flags[0]), signature)
        }
        CellMode::N2U => {
            if !m.is_upper_unitriangular() {
                return Err(CellError::NotInSemigroup("not upper unitriangular".into()));
            }
            if let Err(w) = is_k_nonnegative(m, n - 2).expect("k in range") {
                return Err(CellError::NotInSemigroup(format!("negative minor {w}")));
            }
            let v = ne_bounded_cell(m)?;
            let corner = m.solid_minor(1, n - 1, 2, n);
            let flags = upper_flags(m);
            let signature = Signature { u: Permutation::identity(n), v: v.clone(), det_sign: sign(&corner), corner_flags: flags };
            let tnn = is_k_nonnegative(m, n - 1).expect("k in range").is_ok();
            if tnn {
                if g == Granularity::Coarse {
                    if let Some(wp) = absorbed_prefix(&v) {
                        return mk(t_word(&wp, Lambda::LastSecond), signature);
                    }
                }
                return mk(e_letters(&v), signature);
            }
            let wp = right_divide(&v, &alpha_n2(n))
                .filter(|w| w.at(n - 1) == n - 1 && w.at(n) == n)
                .ok_or_else(|| CellError::Division(format!("v = {v}")))?;
            let lambda = match (flags[0], flags[1], g) {
                (false, false, _) => Lambda::Bare,
                (true, false, _) => Lambda::Second,
                (false, true, _) => Lambda::Last,
                (true, true, Granularity::Fine) => Lambda::SecondLast,
                (true, true, Granularity::Coarse) => Lambda::LastSecond,
            };
            mk(t_word(&wp, lambda), signature)
        }
    }
}

/// For a TNN cell absorbed into a coarse cell, the prefix `w'` with
/// `w = w' β` or `w = w' α`.
pub fn absorbed_prefix(w: &Permutation) -> Option<Permutation> {
    let n = w.n();
    let fits = |q: &Permutation| q.at(n - 1) == n - 1 && q.at(n) == n;
    right_divide(w, &beta_n2(n)).filter(fits).or_else(|| right_divide(w, &alpha_n2(n)).filter(fits))
}

pub fn is_absorbed(w: &Permutation) -> bool {
    bruhat_leq(&beta_n2(w.n()), w).expect("same size")
}

fn peel_loop(cur: &mut Matrix, k: usize, left: &mut Vec<(Letter, Rational)>, right: &mut Vec<(Letter, Rational)>) -> Result<(), CellError> {
    let n = cur.n();
    for _ in 0..10_000 {
        let mut progress = false;
        for i in 1..n {
            for (side, kind) in [
                (Side::Left, Chevalley::E),
                (Side::Left, Chevalley::F),
                (Side::Right, Chevalley::E),
                (Side::Right, Chevalley::F),
            ] {
                if let Some((x, next)) = peel_chevalley(cur, side, kind, i, k) {
                    if x.is_positive() {
                        let letter = if kind == Chevalley::E { Letter::E(i) } else { Letter::F(i) };
                        match side {
                            Side::Left => left.push((letter, x)),
                            Side::Right => right.push((letter, x)),
                        }
                        *cur = next;
                        progress = true;
                    }
                }
            }
        }
        if !progress {
            return Ok(());
        }
    }
    Err(CellError::Residue)
}

/// Corner elimination: clear entries more than `n - k` off the diagonal,
/// last column first and top-down, then the lower corner symmetrically.
fn corner_elimination(cur: &mut Matrix, k: usize, left: &mut Vec<(Letter, Rational)>, right: &mut Vec<(Letter, Rational)>) {
    let n = cur.n();
    let band = n - k;
    for j in (1..=n).rev() {
        for i in 1..j.saturating_sub(band) {
            let (a, b) = (cur.get(i, j).clone(), cur.get(i + 1, j).clone());
            if a.is_positive() && b.is_positive() {
                let t = a / b;
                if let Some((pmax, _)) = peel_chevalley(cur, Side::Left, Chevalley::E, i, k) {
                    if t <= pmax {
                        cur.add_row(i, i + 1, &-t.clone());
                        left.push((Letter::E(i), t));
                    }
                }
            }
        }
    }
    for j in (1..=n).rev() {
        for i in 1..j.saturating_sub(band) {
            let (a, b) = (cur.get(j, i).clone(), cur.get(j, i + 1).clone());
            if a.is_positive() && b.is_positive() {
                let t = a / b;
                if let Some((pmax, _)) = peel_chevalley(cur, Side::Right, Chevalley::F, i, k) {
                    if t <= pmax {
                        cur.add_col(i, i + 1, &-t.clone());
                        right.push((Letter::F(i), t));
                    }
                }
            }
        }
    }
}

/// Factor a matrix of the semigroup into a parametrized word whose product
/// is the matrix; the word canonicalizes to the cell word when the peeled
/// word allows it, and otherwise the cell word itself is solved for.
pub fn factor(m: &Matrix, mode: CellMode, g: Granularity) -> Result<ParamWord, CellError> {
    let cell = classify(m, mode, g)?;
    let n = m.n();
    let k = match (cell.has_generator(), mode) {
        (false, _) => n,
        (true, CellMode::N1) => n - 1,
        (true, CellMode::N2U) => n - 2,
    };
    let mut cur = m.clone();
    let mut left = Vec::new();
    let mut right = Vec::new();
    if k < n {
        corner_elimination(&mut cur, k, &mut left, &mut right);
    }
    peel_loop(&mut cur, k, &mut left, &mut right)?;

    let mut letters: Vec<Letter> = left.iter().map(|(l, _)| *l).collect();
    let mut params: Vec<Rational> = left.iter().map(|(_, x)| x.clone()).collect();
    if cur.is_diagonal() && mode == CellMode::N1 {
        for j in 1..=n {
            if !cur.get(j, j).is_one() {
                letters.push(Letter::H(j));
                params.push(cur.get(j, j).clone());
            }
        }
    } else if mode == CellMode::N1 {
        let mut core = cur.clone();
        for j in 2..=n {
            let d = cur.get(j, j - 1).clone();
            if !d.is_positive() {
                return Err(CellError::Residue);
            }
            if !d.is_one() {
                letters.push(Letter::H(j));
                params.push(d.clone());
            }
            core.scale_row(j, &(Rational::one() / d));
        }
        let p = read_off_k(&core).ok_or(CellError::Residue)?;
        letters.push(Letter::K);
        params.extend(p.flat());
    } else if cur != Matrix::identity(n) {
        let p = read_off_t(&cur).ok_or(CellError::Residue)?;
        letters.push(Letter::T);
        params.extend(p.flat());
    }
    for (l, x) in right.iter().rev() {
        letters.push(*l);
        params.push(x.clone());
    }
    let pw = ParamWord::new(Word::new(n, mode.word_mode(), letters)?, params)?;
    if pw.evaluate() != *m {
        return Err(CellError::Residue);
    }
    if canonicalize(&pw.word, g).ok().as_ref() == Some(&cell.word) {
        return Ok(pw);
    }
    Ok(solve(&cell.word, m).unwrap_or(pw))
}

pub fn sample_cell(cell: &CellId, params: &[Rational]) -> Result<Matrix, CellError> {
    Ok(ParamWord::new(cell.word.clone(), params.to_vec())?.evaluate())
}

pub fn sample_cell_random(cell: &CellId, rng: &mut Prng) -> Matrix {
    let params = positives(rng, cell.word.param_count());
    sample_cell(cell, &params).expect("arity matches")
}

fn cell_from_letters(n: usize, mode: CellMode, g: Granularity, letters: Vec<Letter>) -> CellId {
    let word = Word::new(n, mode.word_mode(), letters).expect("legal letters");
    let ones = vec![Rational::one(); word.param_count()];
    let m = ParamWord::new(word.clone(), ones).expect("arity").evaluate();
    let signature = classify(&m, mode, g).map(|c| c.signature).unwrap_or(Signature {
        u: Permutation::identity(n),
        v: Permutation::identity(n),
        det_sign: 0,
        corner_flags: [false, false],
    });
    CellId { mode, word, signature }
}

/// All cells, TNN ones first (lexicographic in the permutations), then the
/// cells through K or T.
pub fn enumerate_cells(n: usize, mode: CellMode, g: Granularity) -> Result<Vec<CellId>, CellError> {
    if n < mode.min_n() {
        return Err(CellError::TooSmall { n, min: mode.min_n() });
    }
    let perms = Permutation::all(n);
    let mut out = Vec::new();
    match mode {
        CellMode::N1 => {
            for u in &perms {
                for v in &perms {
                    out.push(cell_from_letters(n, mode, g, tnn_word_n1(u, v)));
                }
            }
            let sigmas = Permutation::parabolic(n, 2, n - 1);
            let omegas = Permutation::parabolic(n, 1, n - 2);
            for s in &sigmas {
                for o in &omegas {
                    for (f1, el) in [(false, false), (true, false), (false, true), (true, true)] {
                        out.push(cell_from_letters(n, mode, g, k_word(s, o, f1, el)));
                    }
                }
            }
        }
        CellMode::N2U => {
            for w in &perms {
                if g == Granularity::Coarse && is_absorbed(w) {
                    continue;
                }
                out.push(cell_from_letters(n, mode, g, e_letters(w)));
            }
            for wp in Permutation::parabolic(n, 1, n - 3) {
                for lambda in Lambda::all(g) {
                    out.push(cell_from_letters(n, mode, g, t_word(&wp, lambda)));
                }
            }
        }
    }
    Ok(out)
}

/// The factorization of an (n-1)-positive matrix with negative determinant:
/// `e-word(w0[1,n-1]) e(n-1) K e1 f-word(w0[1,n-1]) h1 ... h(n-1)`.
pub fn remark_word(n: usize) -> Word {
    let w0 = Permutation::longest_on(n, 1, n - 1);
    let mut letters = e_letters(&w0);
    letters.push(Letter::E(n - 1));
    letters.push(Letter::K);
    letters.push(Letter::E(1));
    letters.extend(f_letters(&w0));
    letters.extend((1..n).map(Letter::H));
    Word::new(n, Mode::S, letters).expect("legal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::generators::GeneratorParams;

    fn k111() -> Matrix {
        GeneratorParams::k(3, vec![int(1)], vec![int(1), int(1)]).unwrap().matrix()
    }

    #[test]
    fn ne_cells_of_permutation_matrices() {
        for w in Permutation::all(4) {
            let mut p = Matrix::zeros(4, 4);
            for a in 1..=4 {
                p.set(w.at(a), a, int(1));
            }
            assert_eq!(ne_bounded_cell(&p).unwrap(), w);
            assert!(is_ne_bounded(&p, &w));
        }
        let e1 = crate::generators::chevalley(2, Chevalley::E, 1, &int(1)).unwrap();
        assert_eq!(ne_bounded_cell(&e1).unwrap(), Permutation::simple(2, 1));
        assert!(ne_bounded_cell(&Matrix::identity(3)).unwrap().is_identity());
    }

    #[test]
    fn classify_examples() {
        let id = classify(&Matrix::identity(3), CellMode::N1, Granularity::Fine).unwrap();
        assert_eq!(id.word.to_string(), "h1 h2 h3");
        let k = classify(&k111(), CellMode::N1, Granularity::Fine).unwrap();
        assert_eq!(k.word.to_string(), "h2 h3 K");
        let e2k = crate::generators::chevalley(3, Chevalley::E, 2, &int(1)).unwrap().times(&k111());
        let c = classify(&e2k, CellMode::N1, Granularity::Fine).unwrap();
        assert_eq!(c.word.to_string(), "h2 h3 e2 K");
        assert_eq!(c.signature.corner_flags, [true, false]);
    }

    #[test]
    fn peel_examples() {
        let f1k = crate::generators::chevalley(3, Chevalley::F, 1, &int(1)).unwrap().times(&k111());
        let (x, rest) = peel_chevalley(&f1k, Side::Left, Chevalley::F, 1, 2).unwrap();
        assert_eq!(x, int(1));
        assert_eq!(rest, k111());
        let (z, _) = peel_chevalley(&Matrix::identity(3), Side::Left, Chevalley::E, 1, 3).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_cells(3, CellMode::N1, Granularity::Fine).unwrap().len(), 52);
        assert_eq!(enumerate_cells(4, CellMode::N2U, Granularity::Fine).unwrap().len(), 32);
        assert_eq!(enumerate_cells(4, CellMode::N2U, Granularity::Coarse).unwrap().len(), 28);
        assert_eq!(remark_word(4).param_count(), 16);
    }

    #[test]
    fn cell_json_round_trip() {
        let c = classify(&k111(), CellMode::N1, Granularity::Fine).unwrap();
        let v = c.to_json();
        assert_eq!(v["word"], serde_json::json!(["h2", "h3", "K"]));
        assert_eq!(v["signature"]["det_sign"], -1);
        let back: CellId = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.signature, c.signature);
    }

    #[test]
    fn factor_k() {
        let pw = factor(&k111(), CellMode::N1, Granularity::Fine).unwrap();
        assert_eq!(pw.evaluate(), k111());
        assert_eq!(pw.word.to_string(), "K");
    }
}
