//! Elementary Jacobi matrices, the K and T families, continuants and
//! the band irreducibility tests.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{IndexSet, Matrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("generator index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("parameter must be strictly positive")]
    NonPositive,
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("minor ({0}, {1}) is not solid and has no closed form")]
    NotSolid(IndexSet, IndexSet),
    #[error("not enough coefficients for the requested continuant")]
    Insufficient,
    #[error("zero denominator while evaluating a continued fraction")]
    ZeroDenominator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chevalley {
    E,
    F,
}

pub fn chevalley(n: usize, kind: Chevalley, i: usize, t: &Rational) -> Result<Matrix, GenError> {
    if i == 0 || i >= n {
        return Err(GenError::IndexOutOfRange { index: i, n });
    }
    if !t.is_positive() {
        return Err(GenError::NonPositive);
    }
    Ok(chevalley_any(n, kind, i, t))
}

/// No sign check; used for inverses and boundary limits.
pub fn chevalley_any(n: usize, kind: Chevalley, i: usize, t: &Rational) -> Matrix {
    let mut m = Matrix::identity(n);
    match kind {
        Chevalley::E => m.set(i, i + 1, t.clone()),
        Chevalley::F => m.set(i + 1, i, t.clone()),
    }
    m
}

pub fn jacobi_h(n: usize, i: usize, t: &Rational) -> Result<Matrix, GenError> {
    if i == 0 || i > n {
        return Err(GenError::IndexOutOfRange { index: i, n });
    }
    if !t.is_positive() {
        return Err(GenError::NonPositive);
    }
    let mut m = Matrix::identity(n);
    m.set(i, i, t.clone());
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    K,
    T,
}

/// Parameters `(a, b)` of a K or T generator of size `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorParams {
    pub family: Family,
    pub n: usize,
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
}

/// Size of the tridiagonal block carrying the parameters.
fn block_size(family: Family, n: usize) -> usize {
    match family {
        Family::K => n,
        Family::T => n - 1,
    }
}

pub fn arity(family: Family, n: usize) -> (usize, usize) {
    let m = block_size(family, n);
    (m - 2, m - 1)
}

pub fn min_size(family: Family) -> usize {
    match family {
        Family::K => 3,
        Family::T => 4,
    }
}

impl GeneratorParams {
    pub fn new(family: Family, n: usize, a: Vec<Rational>, b: Vec<Rational>) -> Result<Self, GenError> {
        let p = Self::unchecked(family, n, a, b)?;
        if p.a.iter().chain(p.b.iter()).any(|x| !x.is_positive()) {
            return Err(GenError::NonPositive);
        }
        Ok(p)
    }

    /// Arity-checked but allows zero or negative entries (boundary limits).
    pub fn unchecked(family: Family, n: usize, a: Vec<Rational>, b: Vec<Rational>) -> Result<Self, GenError> {
        if n < min_size(family) {
            return Err(GenError::Arity(format!("{family:?} needs n >= {}", min_size(family))));
        }
        let (la, lb) = arity(family, n);
        if a.len() != la || b.len() != lb {
            return Err(GenError::Arity(format!(
                "{family:?} at n = {n} takes {la} + {lb} parameters, got {} + {}",
                a.len(),
                b.len()
            )));
        }
        Ok(GeneratorParams { family, n, a, b })
    }

    pub fn k(n: usize, a: Vec<Rational>, b: Vec<Rational>) -> Result<Self, GenError> {
        Self::new(Family::K, n, a, b)
    }

    pub fn t(n: usize, a: Vec<Rational>, b: Vec<Rational>) -> Result<Self, GenError> {
        Self::new(Family::T, n, a, b)
    }

    /// Split a flat `a1..am, b1..b(m+1)` list.
    pub fn from_flat(family: Family, n: usize, flat: &[Rational]) -> Result<Self, GenError> {
        if n < min_size(family) {
            return Err(GenError::Arity(format!("{family:?} needs n >= {}", min_size(family))));
        }
        let (la, lb) = arity(family, n);
        if flat.len() != la + lb {
            return Err(GenError::Arity(format!("expected {} parameters, got {}", la + lb, flat.len())));
        }
        Self::new(family, n, flat[..la].to_vec(), flat[la..].to_vec())
    }

    pub fn flat(&self) -> Vec<Rational> {
        self.a.iter().chain(self.b.iter()).cloned().collect()
    }

    /// `a_i`, 1-based.
    pub fn ai(&self, i: usize) -> &Rational {
        &self.a[i - 1]
    }

    pub fn bi(&self, i: usize) -> &Rational {
        &self.b[i - 1]
    }

    pub fn x(&self) -> Rational {
        xy(&self.a, &self.b).0
    }

    pub fn y(&self) -> Rational {
        xy(&self.a, &self.b).1
    }

    pub fn matrix(&self) -> Matrix {
        match self.family {
            Family::K => k_matrix(&self.a, &self.b),
            Family::T => t_matrix(&self.a, &self.b),
        }
    }
}

/// `(X, Y)` for parameter vectors of a block of size `m = a.len() + 2`.
/// Empty products are 1, so `m = 3` gives `X = 1`, `Y = b1`.
pub fn xy(a: &[Rational], b: &[Rational]) -> (Rational, Rational) {
    let r = a.len(); // m - 2
    let y: Rational = b[..r].iter().product();
    let mut x = Rational::zero();
    for k in 1..=r {
        let left: Rational = (2..=k).map(|l| &b[l - 2]).product();
        let right: Rational = (k + 1..=r).map(|l| &a[l - 1]).product();
        x += left * right;
    }
    (x, y)
}

/// The tridiagonal K display, without sign checks.
pub fn k_matrix(a: &[Rational], b: &[Rational]) -> Matrix {
    let n = a.len() + 2;
    assert_eq!(b.len(), n - 1, "K arity");
    let (x, y) = xy(a, b);
    let mut m = Matrix::zeros(n, n);
    for i in 1..=n - 2 {
        let diag = if i >= 2 { &a[i - 1] + &b[i - 2] } else { a[0].clone() };
        m.set(i, i, diag);
        m.set(i, i + 1, &a[i - 1] * &b[i - 1]);
    }
    for i in 2..=n {
        m.set(i, i - 1, Rational::one());
    }
    m.set(n - 1, n - 1, b[n - 3].clone());
    m.set(n - 1, n, &b[n - 2] * &y);
    m.set(n, n, &b[n - 2] * &x);
    m
}

/// Unitriangular T with `T[1..n-1, 2..n] = K(a, b)`.
pub fn t_matrix(a: &[Rational], b: &[Rational]) -> Matrix {
    let k = k_matrix(a, b);
    let n = k.n() + 1;
    let mut t = Matrix::identity(n);
    for i in 1..n {
        for j in 1..n {
            if i != j + 1 {
                t.set(i, j + 1, k.get(i, j).clone());
            }
        }
    }
    t
}

pub fn k_generator(p: &GeneratorParams) -> Result<Matrix, GenError> {
    if p.family != Family::K {
        return Err(GenError::Arity("expected K parameters".into()));
    }
    Ok(p.matrix())
}

pub fn t_generator(p: &GeneratorParams) -> Result<Matrix, GenError> {
    if p.family != Family::T {
        return Err(GenError::Arity("expected T parameters".into()));
    }
    Ok(p.matrix())
}

/// Read K parameters off a matrix that is exactly of K shape.
pub fn read_off_k(m: &Matrix) -> Option<GeneratorParams> {
    let n = m.n();
    if n < 3 {
        return None;
    }
    let mut a: Vec<Rational> = Vec::with_capacity(n - 2);
    let mut b: Vec<Rational> = Vec::with_capacity(n - 1);
    for i in 1..=n - 2 {
        let ai = if i == 1 { m.get(1, 1).clone() } else { m.get(i, i) - &b[i - 2] };
        if ai.is_zero() {
            return None;
        }
        b.push(m.get(i, i + 1) / &ai);
        a.push(ai);
    }
    let y: Rational = b.iter().product();
    if y.is_zero() {
        return None;
    }
    b.push(m.get(n - 1, n) / y);
    let p = GeneratorParams::new(Family::K, n, a, b).ok()?;
    (p.matrix() == *m).then_some(p)
}

/// Read T parameters off an exactly T-shaped matrix.
pub fn read_off_t(m: &Matrix) -> Option<GeneratorParams> {
    let n = m.n();
    if n < 4 || !m.is_upper_unitriangular() {
        return None;
    }
    let sub = m.submatrix(&IndexSet::interval(1, n - 1), &IndexSet::interval(2, n)).ok()?;
    let k = read_off_k(&sub)?;
    let p = GeneratorParams::new(Family::T, n, k.a, k.b).ok()?;
    (p.matrix() == *m).then_some(p)
}

/// `C_i(r)` of the continuant recurrence; `a`, `b` are 1-based lists.
pub fn continuant(a: &[Rational], b: &[Rational], i: usize, r: usize) -> Result<Rational, GenError> {
    if r == 0 {
        return Ok(Rational::one());
    }
    if i == 0 || i + r - 1 > a.len() || (r >= 2 && i + r - 2 > b.len()) {
        return Err(GenError::Insufficient);
    }
    let mut prev = Rational::one();
    let mut cur = a[i - 1].clone();
    for s in 2..=r {
        let next = &a[i + s - 2] * &cur - &b[i + s - 3] * &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `[h0; h1, ..., hm; t1, ..., tm] = h0 - t1 / (h1 - t2 / (h2 - ...))`.
pub fn continued_fraction(head: &[Rational], tail: &[Rational]) -> Result<Rational, GenError> {
    if head.is_empty() || tail.len() + 1 != head.len() {
        return Err(GenError::Insufficient);
    }
    let m = tail.len();
    let mut v = head[m].clone();
    for k in (0..m).rev() {
        if v.is_zero() {
            return Err(GenError::ZeroDenominator);
        }
        v = &head[k] - &tail[k] / v;
    }
    Ok(v)
}

/// The continued fraction `[a_{i+r-1}; ..., a_i; b_{i+r-2}, ..., b_i]` of the
/// ratio `C_i(r) / C_i(r-1)`.
pub fn continuant_ratio(a: &[Rational], b: &[Rational], i: usize, r: usize) -> Result<Rational, GenError> {
    if r == 0 || i == 0 || i + r - 1 > a.len() || (r >= 2 && i + r - 2 > b.len()) {
        return Err(GenError::Insufficient);
    }
    let head: Vec<Rational> = (i..i + r).rev().map(|k| a[k - 1].clone()).collect();
    let tail: Vec<Rational> = (i..i + r - 1).rev().map(|k| b[k - 1].clone()).collect();
    continued_fraction(&head, &tail)
}

fn tridiagonal_coefficients(m: &Matrix) -> Result<(Vec<Rational>, Vec<Rational>), GenError> {
    if !m.is_square() || m.n() < 3 {
        return Err(GenError::WrongShape("need a square matrix of size >= 3".into()));
    }
    let n = m.n();
    for i in 1..=n {
        for j in 1..=n {
            let v = m.get(i, j);
            let band = j + 1 >= i && j <= i + 1;
            if !band && !v.is_zero() {
                return Err(GenError::WrongShape(format!("entry ({i},{j}) outside the band")));
            }
            if i == j + 1 && !v.is_one() {
                return Err(GenError::WrongShape("subdiagonal must be all ones".into()));
            }
            if (i == j || j == i + 1) && v.is_zero() {
                return Err(GenError::WrongShape(format!("zero band entry ({i},{j})")));
            }
        }
    }
    let a = (1..=n).map(|i| m.get(i, i).clone()).collect();
    let b = (1..n).map(|i| m.get(i, i + 1).clone()).collect();
    Ok((a, b))
}

/// Invertible, (n-1)-nonnegative and (n-1)-irreducible, for a tridiagonal
/// matrix with unit subdiagonal and nonzero diagonal and superdiagonal.
pub fn is_tridiagonal_irreducible(m: &Matrix) -> Result<bool, GenError> {
    let (a, b) = tridiagonal_coefficients(m)?;
    let n = a.len();
    if b.iter().any(|x| !x.is_positive()) {
        return Ok(false);
    }
    for x in 1..n - 1 {
        match continuant_ratio(&a, &b, 1, x) {
            Ok(v) if v.is_positive() => {}
            _ => return Ok(false),
        }
    }
    Ok(continuant(&a, &b, 1, n - 1)?.is_zero() && continuant(&a, &b, 2, n - 1)?.is_zero())
}

/// The unitriangular analogue for pentadiagonal matrices; the parameters
/// live on the block of rows `[1, n-1]` and columns `[2, n]`.
pub fn is_pentadiagonal_irreducible(m: &Matrix) -> Result<bool, GenError> {
    if !m.is_square() || m.n() < 4 || !m.is_upper_unitriangular() {
        return Err(GenError::WrongShape("need an upper unitriangular matrix of size >= 4".into()));
    }
    let n = m.n();
    for i in 1..=n {
        for j in i + 1..=n {
            let v = m.get(i, j);
            if j > i + 2 && !v.is_zero() {
                return Err(GenError::WrongShape(format!("entry ({i},{j}) outside the band")));
            }
            if j <= i + 2 && v.is_zero() {
                return Err(GenError::WrongShape(format!("zero band entry ({i},{j})")));
            }
        }
    }
    let sub = m
        .submatrix(&IndexSet::interval(1, n - 1), &IndexSet::interval(2, n))
        .expect("in range");
    is_tridiagonal_irreducible(&sub)
}

fn prod_range<'a>(it: impl Iterator<Item = &'a Rational>) -> Rational {
    it.fold(Rational::one(), |acc, x| acc * x)
}

/// Closed forms for the solid minors of K. Intervals are `[r1,r2] x [c1,c2]`.
pub fn k_minor_closed_form(p: &GeneratorParams, rows: &IndexSet, cols: &IndexSet) -> Result<Rational, GenError> {
    if p.family != Family::K {
        return Err(GenError::Arity("closed forms are for K".into()));
    }
    if rows.len() != cols.len() || !rows.is_interval() || !cols.is_interval() {
        return Err(GenError::NotSolid(rows.clone(), cols.clone()));
    }
    let n = p.n;
    if rows.last() > n || cols.last() > n {
        return Err(GenError::IndexOutOfRange { index: rows.last().max(cols.last()), n });
    }
    // a_k for k in 1..=n-1 with a_{n-1} = 0; b_k for k in 0..=n-1 with b_0 = 0.
    let zero = Rational::zero();
    let a = |k: usize| if (1..=n - 2).contains(&k) { &p.a[k - 1] } else { &zero };
    let b = |k: usize| if (1..=n - 1).contains(&k) { &p.b[k - 1] } else { &zero };
    let (i, j) = (rows.first(), rows.last());
    let shift = cols.first() as i64 - i as i64;
    let principal = |i: usize, j: usize| -> Rational {
        // valid for j < n
        let mut s = Rational::zero();
        for k in i - 1..=j {
            s += prod_range((i..=k).map(|l| b(l - 1))) * prod_range((k + 1..=j).map(a));
        }
        s
    };
    let value = match shift {
        0 if j < n => principal(i, j),
        0 => match i {
            1 => -(prod_range(p.a.iter()) * prod_range(p.b.iter())),
            2 => Rational::zero(),
            _ => {
                let inner = if i >= 4 { principal(2, i - 2) } else { Rational::one() };
                prod_range((i..=n).map(|k| b(k - 1))) * prod_range((i - 1..=n - 2).map(a)) * inner
            }
        },
        1 if cols.last() == n => {
            prod_range((i..=n - 2).map(|k| a(k) * b(k)).collect::<Vec<_>>().iter()) * b(n - 1) * p.y()
        }
        1 => prod_range((i..=j).map(|k| a(k) * b(k)).collect::<Vec<_>>().iter()),
        -1 => Rational::one(),
        _ => Rational::zero(),
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn ones(n: usize) -> Vec<Rational> {
        vec![int(1); n]
    }

    #[test]
    fn k_display_n3() {
        let k = GeneratorParams::k(3, ones(1), ones(2)).unwrap().matrix();
        assert_eq!(k, Matrix::from_ints(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]]));
        assert_eq!(k.det().unwrap(), int(-1));
        assert_eq!(k.solid_minor(1, 2, 1, 2), int(0));
        assert_eq!(k.solid_minor(2, 3, 2, 3), int(0));
    }

    #[test]
    fn t_display_n4() {
        let t = GeneratorParams::t(4, ones(1), ones(2)).unwrap().matrix();
        assert_eq!(t, Matrix::from_ints(&[&[1, 1, 1, 0], &[0, 1, 1, 1], &[0, 0, 1, 1], &[0, 0, 0, 1]]));
        assert_eq!(t.solid_minor(1, 3, 2, 4), int(-1));
    }

    #[test]
    fn elementary() {
        assert_eq!(
            chevalley(2, Chevalley::E, 1, &int(1)).unwrap(),
            Matrix::from_ints(&[&[1, 1], &[0, 1]])
        );
        let f = chevalley(3, Chevalley::F, 2, &rat(1, 2)).unwrap();
        assert_eq!(f, chevalley(3, Chevalley::E, 2, &rat(1, 2)).unwrap().transpose());
        assert_eq!(jacobi_h(3, 2, &int(3)).unwrap(), Matrix::from_ints(&[&[1, 0, 0], &[0, 3, 0], &[0, 0, 1]]));
        assert!(chevalley(3, Chevalley::E, 3, &int(1)).is_err());
        assert!(jacobi_h(3, 1, &int(0)).is_err());
    }

    #[test]
    fn continuants() {
        let a = vec![int(2), int(2), int(2)];
        let b = vec![int(1), int(1)];
        assert_eq!(continuant(&a, &b, 1, 0).unwrap(), int(1));
        assert_eq!(continuant(&a, &b, 1, 2).unwrap(), int(3));
        assert_eq!(continuant(&a, &b, 1, 3).unwrap(), int(4));
        assert!(continuant(&a, &b, 2, 3).is_err());
        assert_eq!(continued_fraction(&[int(2)], &[]).unwrap(), int(2));
        assert_eq!(continued_fraction(&[int(2), int(2)], &[int(1)]).unwrap(), rat(3, 2));
        assert_eq!(continuant_ratio(&a, &b, 1, 3).unwrap(), rat(4, 3));
        assert_eq!(continued_fraction(&[int(1), int(0)], &[int(1)]), Err(GenError::ZeroDenominator));
    }

    #[test]
    fn irreducibility() {
        let k = GeneratorParams::k(4, vec![int(2), rat(1, 3)], vec![int(1), int(5), rat(2, 7)]).unwrap().matrix();
        assert!(is_tridiagonal_irreducible(&k).unwrap());
        let mut bumped = k.clone();
        bumped.set(1, 1, k.get(1, 1) + int(1));
        assert!(!is_tridiagonal_irreducible(&bumped).unwrap());
        let mut neg = k.clone();
        neg.set(1, 2, -k.get(1, 2));
        assert!(!is_tridiagonal_irreducible(&neg).unwrap());
        let t = GeneratorParams::t(5, vec![int(1), int(2)], vec![int(3), int(1), rat(1, 2)]).unwrap().matrix();
        assert!(is_pentadiagonal_irreducible(&t).unwrap());
    }

    #[test]
    fn read_off_round_trip() {
        let p = GeneratorParams::k(5, vec![int(2), rat(1, 3), int(4)], vec![int(1), int(5), rat(2, 7), int(3)]).unwrap();
        assert_eq!(read_off_k(&p.matrix()).unwrap(), p);
        let q = GeneratorParams::t(5, vec![int(1), int(2)], vec![int(3), int(1), rat(1, 2)]).unwrap();
        assert_eq!(read_off_t(&q.matrix()).unwrap(), q);
        assert!(read_off_k(&Matrix::identity(4)).is_none());
    }
}
