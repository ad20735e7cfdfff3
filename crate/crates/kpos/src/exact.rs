//! Exact rational matrices and minors.
//!
//! Indices are 1-based everywhere in the public API so that interval
//! notation such as `[i, j]` maps directly onto [`IndexSet::interval`].

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("malformed rational token {0:?}")]
    BadRational(String),
    #[error("malformed matrix document: {0}")]
    BadDocument(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p/q` as a rational; panics on `q == 0` (callers pass literals).
pub fn rat(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn parse_rational(tok: &str) -> Result<Rational, ExactError> {
    let t = tok.trim();
    let bad = || ExactError::BadRational(tok.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (t, None),
    };
    let p = BigInt::from_str(num).map_err(|_| bad())?;
    let q = match den {
        Some(q) => BigInt::from_str(q).map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Canonical text: `p` when the denominator is 1, else `p/q` with `q > 0`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational, ExactError> {
    if b.is_zero() {
        Err(ExactError::DivisionByZero)
    } else {
        Ok(a / b)
    }
}

pub fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Strictly increasing, nonempty, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self, ExactError> {
        if indices.is_empty() {
            return Err(ExactError::InvalidIndexSet("empty".into()));
        }
        if indices[0] == 0 {
            return Err(ExactError::InvalidIndexSet("indices are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExactError::InvalidIndexSet(format!("{indices:?} not strictly increasing")));
        }
        Ok(IndexSet(indices))
    }

    /// The interval `[lo, hi]`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        assert!(lo >= 1 && lo <= hi, "bad interval [{lo},{hi}]");
        IndexSet((lo..=hi).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_interval(&self) -> bool {
        self.0.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().unwrap()
    }

    /// Replace `from` by `to`, keeping the set sorted. `from` must be present
    /// and `to` absent.
    pub fn swap_index(&self, from: usize, to: usize) -> IndexSet {
        let mut v: Vec<usize> = self.0.iter().map(|&x| if x == from { to } else { x }).collect();
        v.sort_unstable();
        IndexSet(v)
    }

    /// All `r`-subsets of `[1, n]` in lexicographic order.
    pub fn subsets(n: usize, r: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        if r == 0 || r > n {
            return out;
        }
        let mut cur: Vec<usize> = (1..=r).collect();
        loop {
            out.push(IndexSet(cur.clone()));
            let mut k = r;
            while k > 0 && cur[k - 1] == n - r + k {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            cur[k - 1] += 1;
            for t in k..r {
                cur[t] = cur[t - 1] + 1;
            }
        }
        out
    }

    /// All intervals of length `r` inside `[1, n]`, by starting point.
    pub fn intervals(n: usize, r: usize) -> Vec<IndexSet> {
        if r == 0 || r > n {
            return Vec::new();
        }
        (1..=n + 1 - r).map(|s| IndexSet::interval(s, s + r - 1)).collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 1..=n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let r = rows.len();
        if r == 0 {
            return Err(ExactError::DimensionMismatch("no rows".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::DimensionMismatch("ragged or empty rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience for tests and examples.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Size of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        debug_assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols);
        &self.data[(i - 1) * self.cols + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        debug_assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols);
        self.data[(i - 1) * self.cols + (j - 1)] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.cols).map(|c| c.to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 1..=self.rows {
            for j in 1..=self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        mat_mul(self, other)
    }

    /// Product of square matrices of equal size; panics on mismatch.
    pub fn times(&self, other: &Matrix) -> Matrix {
        mat_mul(self, other).expect("square matrices of equal size")
    }

    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Matrix, ExactError> {
        for &i in rows.as_slice() {
            if i > self.rows {
                return Err(ExactError::IndexOutOfRange { index: i, bound: self.rows });
            }
        }
        for &j in cols.as_slice() {
            if j > self.cols {
                return Err(ExactError::IndexOutOfRange { index: j, bound: self.cols });
            }
        }
        let mut s = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.as_slice().iter().enumerate() {
            for (b, &j) in cols.as_slice().iter().enumerate() {
                s.set(a + 1, b + 1, self.get(i, j).clone());
            }
        }
        Ok(s)
    }

    pub fn det(&self) -> Result<Rational, ExactError> {
        if !self.is_square() {
            return Err(ExactError::DimensionMismatch(format!("det of {}x{}", self.rows, self.cols)));
        }
        Ok(if self.rows < 5 { cofactor_det(self) } else { bareiss_det(self) })
    }

    pub fn minor(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Rational, ExactError> {
        minor(self, rows, cols)
    }

    /// Minor on `[r1,r2] x [c1,c2]`; panics on bad bounds.
    pub fn solid_minor(&self, r1: usize, r2: usize, c1: usize, c2: usize) -> Rational {
        minor(self, &IndexSet::interval(r1, r2), &IndexSet::interval(c1, c2)).expect("solid minor in range")
    }

    pub fn rank(&self) -> usize {
        let mut m = self.rows();
        let (r, c) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..c {
            let Some(p) = (rank..r).find(|&i| !m[i][col].is_zero()) else { continue };
            m.swap(rank, p);
            for i in rank + 1..r {
                if m[i][col].is_zero() {
                    continue;
                }
                let f = &m[i][col] / &m[rank][col];
                for j in col..c {
                    let d = &f * &m[rank][j];
                    m[i][j] -= d;
                }
            }
            rank += 1;
            if rank == r {
                break;
            }
        }
        rank
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_square()
            && (1..=self.rows).all(|i| {
                self.get(i, i).is_one() && (1..i).all(|j| self.get(i, j).is_zero())
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (1..=self.rows).all(|i| (1..=self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn scale_row(&mut self, i: usize, s: &Rational) {
        for j in 1..=self.cols {
            let v = self.get(i, j) * s;
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, s: &Rational) {
        for i in 1..=self.rows {
            let v = self.get(i, j) * s;
            self.set(i, j, v);
        }
    }

    /// row `dst` += s * row `src`
    pub fn add_row(&mut self, dst: usize, src: usize, s: &Rational) {
        for j in 1..=self.cols {
            let v = self.get(dst, j) + s * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col `dst` += s * col `src`
    pub fn add_col(&mut self, dst: usize, src: usize, s: &Rational) {
        for i in 1..=self.rows {
            let v = self.get(i, dst) + s * self.get(i, src);
            self.set(i, dst, v);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.rows {
            let row: Vec<String> = (1..=self.cols).map(|j| format_rational(self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix, ExactError> {
    if a.cols != b.rows {
        return Err(ExactError::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut c = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = &a.data[i * a.cols + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let y = &b.data[k * b.cols + j];
                if !y.is_zero() {
                    c.data[i * b.cols + j] += x * y;
                }
            }
        }
    }
    Ok(c)
}

pub fn minor(m: &Matrix, rows: &IndexSet, cols: &IndexSet) -> Result<Rational, ExactError> {
    if rows.len() != cols.len() {
        return Err(ExactError::DimensionMismatch(format!(
            "minor with |I|={} and |J|={}",
            rows.len(),
            cols.len()
        )));
    }
    m.submatrix(rows, cols)?.det()
}

fn cofactor_det(m: &Matrix) -> Rational {
    let n = m.rows;
    let idx: Vec<usize> = (0..n).collect();
    cofactor_rec(m, 0, &idx)
}

fn cofactor_rec(m: &Matrix, row: usize, cols: &[usize]) -> Rational {
    if cols.len() == 1 {
        return m.data[row * m.cols + cols[0]].clone();
    }
    let mut acc = Rational::zero();
    for (k, &c) in cols.iter().enumerate() {
        let x = &m.data[row * m.cols + c];
        if x.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&d| d != c).collect();
        let sub = x * cofactor_rec(m, row + 1, &rest);
        if k % 2 == 0 {
            acc += sub;
        } else {
            acc -= sub;
        }
    }
    acc
}

/// Fraction-free elimination after clearing each row's denominators.
fn bareiss_det(m: &Matrix) -> Rational {
    let n = m.rows;
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m.data.chunks(n) {
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = Rational::new(a[n - 1][n - 1].clone(), scale);
    if negate {
        -d
    } else {
        d
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    n: usize,
    entries: Vec<Vec<String>>,
}

pub fn parse_matrix(text: &str) -> Result<Matrix, ExactError> {
    let doc: MatrixDoc =
        serde_json::from_str(text).map_err(|e| ExactError::BadDocument(e.to_string()))?;
    if doc.n == 0 || doc.entries.len() != doc.n {
        return Err(ExactError::BadDocument(format!(
            "n = {} but {} rows",
            doc.n,
            doc.entries.len()
        )));
    }
    let mut rows = Vec::with_capacity(doc.n);
    for row in &doc.entries {
        if row.len() != doc.n {
            return Err(ExactError::BadDocument("ragged rows".into()));
        }
        rows.push(row.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>()?);
    }
    Matrix::from_rows(rows)
}

pub fn serialize_matrix(m: &Matrix) -> String {
    let doc = MatrixDoc {
        n: m.rows,
        entries: m.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_subsets() {
        let s: Vec<Vec<usize>> = IndexSet::subsets(4, 2).into_iter().map(|x| x.0).collect();
        assert_eq!(s, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
        assert_eq!(IndexSet::subsets(5, 3).len(), 10);
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(vec![]).is_err());
        assert!(IndexSet::new(vec![0, 1]).is_err());
        assert!(IndexSet::new(vec![2, 2]).is_err());
        assert!(IndexSet::new(vec![1, 3]).unwrap().contains(3));
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = Matrix::from_rows(
            (0..6)
                .map(|i| (0..6).map(|j| rat(((i * 7 + j * 3) % 11) as i64 - 4, (i + j + 1) as i64)).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(bareiss_det(&m), big_cofactor(&m));
    }

    fn big_cofactor(m: &Matrix) -> Rational {
        cofactor_det(m)
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational(" -2 ").unwrap(), int(-2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-3, 6)), "-1/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn rank_of_singular() {
        let m = Matrix::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::identity(4).rank(), 4);
    }
}
