//! The relation catalog: Chevalley/Jacobi identities and the K and T
//! relations, each with an exact parameter transform that is checked by
//! re-evaluation. Printed transforms are kept alongside so that reports can
//! show where they disagree with the verified ones.

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::split::{cell_split, SplitBranch};
use super::{solve, Letter, Mode, ParamWord, Word, WordError};
use crate::exact::{format_rational, IndexSet, Rational};
use crate::generators::{t_matrix, xy, Family, GeneratorParams};
use crate::random::{positive, positives, prng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    K1,
    K2,
    K3,
    K3m,
    K4,
    K5,
    K6,
    K7,
    T1,
    T2,
    T3,
    Split,
    ShortE,
    ShortF,
    BraidE,
    BraidF,
    CommuteE,
    CommuteF,
    CommuteEF,
    ExchangeEF,
    HE,
    HF,
    HH,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// A rule instantiated at a size and index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub left: Vec<Letter>,
    pub right: Vec<Letter>,
}

impl RuleInstance {
    fn mode(&self) -> Mode {
        if self.left.contains(&Letter::T) {
            Mode::T
        } else {
            Mode::S
        }
    }

    pub fn left_word(&self) -> Word {
        Word { n: self.n, mode: self.mode(), letters: self.left.clone() }
    }

    pub fn right_word(&self) -> Word {
        Word { n: self.n, mode: self.mode(), letters: self.right.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteRule {
    pub id: RuleId,
    pub mode: Mode,
    pub statement: &'static str,
    pub subtraction_free: bool,
    /// Whether the backward direction determines the left parameters.
    pub invertible: bool,
    pub note: &'static str,
}

pub fn catalog() -> Vec<RewriteRule> {
    use RuleId::*;
    let r = |id, mode, statement, subtraction_free, invertible, note| RewriteRule {
        id,
        mode,
        statement,
        subtraction_free,
        invertible,
        note,
    };
    vec![
        r(K1, Mode::S, "e_i(x) K(a,b) = K(A,B) e_{i+1}(x'), 1 <= i <= n-2", true, true, "printed forward holds"),
        r(K2, Mode::S, "e_{n-1}(x) K(a,b) = K(A,B) f_{n-1}(x') h_{n-1}(c)", true, true, "x' = x/(b_1...b_{n-1})"),
        r(K3, Mode::S, "f_{i+1}(x) K(a,b) = h_{i+2}(1/w) K(A,B) f_i(x) h_i(w), 1 <= i <= n-2", true, true, "corrected A, B"),
        r(K3m, Mode::S, "f_{i+1}(x) K(a,b) = K(A,B) h_{i+1}(1/w) f_i(x) h_i(w), 1 <= i <= n-2", true, true, "corrected A, B"),
        r(K4, Mode::S, "f_1(x) K(a,b) = K(A,B) e_1(x') h_1(c)", true, true, "c = 1 + x a_1"),
        r(K5, Mode::S, "h_i(x) K(a,b) = K(A,B) h_{i-1}(x), 2 <= i <= n", true, true, "corrected A, B"),
        r(K6, Mode::S, "h_1(x) K(a,b) = K(A,B)", true, false, "printed forward holds"),
        r(K7, Mode::S, "K(a,b) h_n(x) = K(A,B)", true, false, "B_{n-1} = x b_{n-1}"),
        r(T1, Mode::T, "e_i(x) T(a,b) = T(A,B) e_{i+2}(x'), 1 <= i <= n-3", true, true, "corrected at i = n-3"),
        r(T2, Mode::T, "e_{n-2}(x) T(a,b) = T(A,B) e_1(x')", false, true, "recurrence with B_{n-2} = b_{n-2}"),
        r(T3, Mode::T, "e_{n-1}(x) T(a,b) = T(A,B) e_2(x')", true, true, "corrected B_{n-2}, B_1, x'"),
        r(Split, Mode::T, "e_{n-1}(u) e_{n-2}(v) T(a,b) = NEG | ZERO | POS", false, false, "three-way split"),
        r(ShortE, Mode::S, "e_i(s) e_i(t) = e_i(s+t)", true, false, ""),
        r(ShortF, Mode::S, "f_i(s) f_i(t) = f_i(s+t)", true, false, ""),
        r(BraidE, Mode::S, "e_i e_{i+1} e_i = e_{i+1} e_i e_{i+1}", true, true, ""),
        r(BraidF, Mode::S, "f_i f_{i+1} f_i = f_{i+1} f_i f_{i+1}", true, true, ""),
        r(CommuteE, Mode::S, "e_i e_j = e_j e_i, |i-j| >= 2", true, true, ""),
        r(CommuteF, Mode::S, "f_i f_j = f_j f_i, |i-j| >= 2", true, true, ""),
        r(CommuteEF, Mode::S, "e_i f_j = f_j e_i, i != j", true, true, ""),
        r(ExchangeEF, Mode::S, "e_i(a) f_i(b) = f_i(b/d) h_i(d) h_{i+1}(1/d) e_i(a/d), d = 1 + ab", true, true, ""),
        r(HE, Mode::S, "h_j(x) e_i(t) = e_i(t') h_j(x)", true, true, ""),
        r(HF, Mode::S, "h_j(x) f_i(t) = f_i(t') h_j(x)", true, true, ""),
        r(HH, Mode::S, "h_j(x) h_j(y) = h_j(xy)", true, false, ""),
    ]
}

pub fn rule(id: RuleId) -> RewriteRule {
    catalog().into_iter().find(|r| r.id == id).expect("every id is in the catalog")
}

fn min_n(id: RuleId) -> usize {
    use RuleId::*;
    match id {
        K1 | K2 | K3 | K3m | K4 | K5 | K6 | K7 => 3,
        T1 | T2 | T3 | Split => 4,
        _ => 2,
    }
}

impl RewriteRule {
    pub fn instances(&self, n: usize) -> Vec<RuleInstance> {
        use Letter::*;
        use RuleId::*;
        if n < min_n(self.id) {
            return Vec::new();
        }
        let mk = |i: usize, j: usize, left: Vec<Letter>, right: Vec<Letter>| RuleInstance {
            rule: self.id,
            n,
            i,
            j,
            left,
            right,
        };
        let mut out = Vec::new();
        match self.id {
            K1 => (1..=n - 2).for_each(|i| out.push(mk(i, 0, vec![E(i), K], vec![K, E(i + 1)]))),
            K2 => out.push(mk(n - 1, 0, vec![E(n - 1), K], vec![K, F(n - 1), H(n - 1)])),
            K3 => (1..=n - 2).for_each(|i| out.push(mk(i, 0, vec![F(i + 1), K], vec![H(i + 2), K, F(i), H(i)]))),
            K3m => (1..=n - 2).for_each(|i| out.push(mk(i, 0, vec![F(i + 1), K], vec![K, H(i + 1), F(i), H(i)]))),
            K4 => out.push(mk(1, 0, vec![F(1), K], vec![K, E(1), H(1)])),
            K5 => (2..=n).for_each(|i| out.push(mk(i, 0, vec![H(i), K], vec![K, H(i - 1)]))),
            K6 => out.push(mk(1, 0, vec![H(1), K], vec![K])),
            K7 => out.push(mk(n, 0, vec![K, H(n)], vec![K])),
            T1 => (1..=n - 3).for_each(|i| out.push(mk(i, 0, vec![E(i), T], vec![T, E(i + 2)]))),
            T2 => out.push(mk(n - 2, 0, vec![E(n - 2), T], vec![T, E(1)])),
            T3 => out.push(mk(n - 1, 0, vec![E(n - 1), T], vec![T, E(2)])),
            Split => out.push(mk(n - 1, 0, vec![E(n - 1), E(n - 2), T], vec![E(n - 2), E(n - 1), T])),
            ShortE => (1..n).for_each(|i| out.push(mk(i, 0, vec![E(i), E(i)], vec![E(i)]))),
            ShortF => (1..n).for_each(|i| out.push(mk(i, 0, vec![F(i), F(i)], vec![F(i)]))),
            BraidE => (1..n.saturating_sub(1)).for_each(|i| {
                out.push(mk(i, 0, vec![E(i), E(i + 1), E(i)], vec![E(i + 1), E(i), E(i + 1)]))
            }),
            BraidF => (1..n.saturating_sub(1)).for_each(|i| {
                out.push(mk(i, 0, vec![F(i), F(i + 1), F(i)], vec![F(i + 1), F(i), F(i + 1)]))
            }),
            CommuteE | CommuteF | CommuteEF => {
                for i in 1..n {
                    for j in 1..n {
                        let ok = match self.id {
                            CommuteEF => i != j,
                            _ => i.abs_diff(j) >= 2,
                        };
                        if !ok {
                            continue;
                        }
                        let (a, b) = match self.id {
                            CommuteE => (E(i), E(j)),
                            CommuteF => (F(i), F(j)),
                            _ => (E(i), F(j)),
                        };
                        out.push(mk(i, j, vec![a, b], vec![b, a]));
                    }
                }
            }
            ExchangeEF => {
                (1..n).for_each(|i| out.push(mk(i, 0, vec![E(i), F(i)], vec![F(i), H(i), H(i + 1), E(i)])))
            }
            HE | HF => {
                for j in 1..=n {
                    for i in 1..n {
                        let c = if self.id == HE { E(i) } else { F(i) };
                        out.push(mk(i, j, vec![H(j), c], vec![c, H(j)]));
                    }
                }
            }
            HH => (1..=n).for_each(|j| out.push(mk(0, j, vec![H(j), H(j)], vec![H(j)]))),
        }
        out
    }

    /// The verified transform: right-hand parameters from left-hand ones.
    pub fn forward(&self, inst: &RuleInstance, params: &[Rational]) -> Option<Vec<Rational>> {
        transform(self.id, inst, params, false)
    }

    /// The transform as printed, where one exists.
    pub fn printed_forward(&self, inst: &RuleInstance, params: &[Rational]) -> Option<Vec<Rational>> {
        transform(self.id, inst, params, true)
    }

    pub fn has_printed(&self) -> bool {
        use RuleId::*;
        matches!(self.id, K1 | K2 | K3 | K3m | K4 | K5 | K6 | K7 | T1 | T2 | T3)
    }

    /// Left-hand parameters from right-hand ones, or `None` when the rule
    /// is not invertible.
    pub fn backward(&self, inst: &RuleInstance, params: &[Rational]) -> Option<Vec<Rational>> {
        use RuleId::*;
        if !self.invertible {
            return None;
        }
        match self.id {
            BraidE | BraidF => braid(params),
            CommuteE | CommuteF | CommuteEF => Some(vec![params[1].clone(), params[0].clone()]),
            HE | HF => {
                let x = &params[1];
                let t = &params[0];
                Some(vec![x.clone(), h_shift(self.id, inst, t, x, true)])
            }
            _ => {
                let right = ParamWord::new(inst.right_word(), params.to_vec()).ok()?;
                solve(&inst.left_word(), &right.evaluate()).map(|pw| pw.params)
            }
        }
    }

    pub fn printed_backward(&self, inst: &RuleInstance, params: &[Rational]) -> Option<Vec<Rational>> {
        printed_backward(self.id, inst, params)
    }

    pub fn has_printed_backward(&self) -> bool {
        matches!(self.id, RuleId::K1 | RuleId::K4 | RuleId::T1 | RuleId::T3)
    }
}

/// 1-based view of the `(a, b)` parameters of a K or T letter.
#[derive(Clone)]
struct Ab {
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl Ab {
    fn split(flat: &[Rational], la: usize) -> Ab {
        Ab { a: flat[..la].to_vec(), b: flat[la..].to_vec() }
    }
    fn a(&self, i: usize) -> Rational {
        self.a[i - 1].clone()
    }
    fn b(&self, i: usize) -> Rational {
        self.b[i - 1].clone()
    }
    /// `a_i`, zero outside `1..=len`.
    fn a0(&self, i: usize) -> Rational {
        if (1..=self.a.len()).contains(&i) {
            self.a(i)
        } else {
            Rational::zero()
        }
    }
    fn set_a(&mut self, i: usize, v: Rational) {
        self.a[i - 1] = v;
    }
    fn set_b(&mut self, i: usize, v: Rational) {
        self.b[i - 1] = v;
    }
    fn mul_a(&mut self, i: usize, f: &Rational) {
        if (1..=self.a.len()).contains(&i) {
            self.a[i - 1] *= f;
        }
    }
    fn mul_b(&mut self, i: usize, f: &Rational) {
        if (1..=self.b.len()).contains(&i) {
            self.b[i - 1] *= f;
        }
    }
    fn flat(&self) -> Vec<Rational> {
        self.a.iter().chain(self.b.iter()).cloned().collect()
    }
    fn prod_b(&self, lo: usize, hi: usize) -> Rational {
        (lo..=hi).map(|k| self.b(k)).fold(Rational::one(), |p, x| p * x)
    }
    fn prod_a(&self, lo: usize, hi: usize) -> Rational {
        (lo..=hi).map(|k| self.a(k)).fold(Rational::one(), |p, x| p * x)
    }
}

fn inv(x: &Rational) -> Option<Rational> {
    (!x.is_zero()).then(|| Rational::one() / x)
}

fn braid(p: &[Rational]) -> Option<Vec<Rational>> {
    let s = &p[0] + &p[2];
    let si = inv(&s)?;
    Some(vec![&p[1] * &p[2] * &si, s.clone(), &p[0] * &p[1] * &si])
}

fn h_shift(id: RuleId, inst: &RuleInstance, t: &Rational, x: &Rational, undo: bool) -> Rational {
    let (i, j) = (inst.i, inst.j);
    // exponent of x in t' = x^e t
    let e: i32 = match id {
        RuleId::HE if j == i => 1,
        RuleId::HE if j == i + 1 => -1,
        RuleId::HF if j == i + 1 => 1,
        RuleId::HF if j == i => -1,
        _ => 0,
    };
    let e = if undo { -e } else { e };
    match e {
        1 => t * x,
        -1 => t / x,
        _ => t.clone(),
    }
}

/// K1/T1 interior form and its K1 boundary, shared by the printed and
/// verified transforms.
fn shift_interior(ab: &Ab, i: usize, x: &Rational) -> Option<(Ab, Rational)> {
    let mut out = ab.clone();
    let s = ab.a(i) + x;
    let den = ab.b(i) * &s + x * ab.a(i + 1);
    out.set_a(i, s.clone());
    out.set_a(i + 1, ab.a(i) * ab.a(i + 1) / &s);
    out.set_b(i, ab.b(i) + x * ab.a(i + 1) / &s);
    out.set_b(i + 1, ab.b(i) * ab.b(i + 1) * &s / &den);
    let xp = ab.b(i + 1) * ab.a(i + 1) * x / den;
    Some((out, xp))
}

fn transform(id: RuleId, inst: &RuleInstance, p: &[Rational], printed: bool) -> Option<Vec<Rational>> {
    use RuleId::*;
    let n = inst.n;
    let i = inst.i;
    let la_k = n.saturating_sub(2);
    let la_t = n.saturating_sub(3);
    let one = Rational::one();
    let out = match id {
        K1 => {
            let x = &p[0];
            let ab = Ab::split(&p[1..], la_k);
            if i < n - 2 {
                let (out, xp) = shift_interior(&ab, i, x)?;
                let mut v = out.flat();
                v.push(xp);
                v
            } else {
                let mut out = ab.clone();
                let s = ab.a(n - 2) + x;
                out.set_a(n - 2, s.clone());
                out.set_b(n - 1, ab.b(n - 1) * ab.a(n - 2) / &s);
                let xp = ab.prod_b(1, n - 1) * x / (ab.b(n - 2) * &s);
                let mut v = out.flat();
                v.push(xp);
                v
            }
        }
        K2 => {
            let x = &p[0];
            let ab = Ab::split(&p[1..], la_k);
            let (xx, y) = xy(&ab.a, &ab.b);
            let c = &y / (&y + x * &xx);
            let mut out = ab.clone();
            out.set_b(n - 2, ab.b(n - 2) / &c);
            let xp = if printed { x / &y } else { x / (&y * ab.b(n - 1)) };
            let mut v = out.flat();
            v.push(xp);
            v.push(c);
            v
        }
        K3 | K3m => {
            let x = &p[0];
            let ab = Ab::split(&p[1..], la_k);
            let (out, w) = if printed { k3_printed(&ab, n, i, x)? } else { k3_corrected(&ab, n, i, x, id == K3m) };
            let winv = inv(&w)?;
            let mut v = Vec::new();
            if id == K3 {
                v.push(winv.clone());
                v.extend(out.flat());
            } else {
                v.extend(out.flat());
                v.push(winv);
            }
            v.push(x.clone());
            v.push(w);
            v
        }
        K4 => {
            let x = &p[0];
            let ab = Ab::split(&p[1..], la_k);
            let d = &one + x * ab.a(1);
            let mut out = ab.clone();
            out.set_a(1, ab.a(1) / &d);
            let xp = x * ab.b(1) * ab.a(1);
            let c = if printed { &one / &d } else { d };
            let mut v = out.flat();
            v.push(xp);
            v.push(c);
            v
        }
        K5 => {
            let x = &p[0];
            let ab = Ab::split(&p[1..], la_k);
            let xi = inv(x)?;
            let mut out = ab.clone();
            if printed {
                if i <= n - 2 {
                    out.mul_a(i, x);
                    out.mul_a(i + 1, &xi);
                }
                out.mul_b(i - 1, x);
                out.mul_b(i, &xi);
            } else {
                out.mul_a(i - 1, &xi);
                out.mul_a(i, x);
                if i >= 3 {
                    out.mul_b(i - 2, &xi);
                }
                out.mul_b(i - 1, x);
                if i == 2 {
                    out.mul_b(n - 1, &xi);
                }
                if i == n - 1 {
                    out.mul_b(n - 1, x);
                }
            }
            let mut v = out.flat();
            v.push(x.clone());
            v
        }
        K6 => {
            let x = &p[0];
            let mut out = Ab::split(&p[1..], la_k);
            out.mul_a(1, x);
            out.flat()
        }
        K7 => {
            let x = &p[2 * n - 3];
            let mut out = Ab::split(&p[..2 * n - 3], la_k);
            if printed {
                out.mul_b(n - 2, x);
            } else {
                out.mul_b(n - 1, x);
            }
            out.flat()
        }
        T1 => {
            let x = &p[0];
            let ab = Ab::split(&p[1..], la_t);
            let (out, xp) = if i < n - 3 {
                shift_interior(&ab, i, x)?
            } else if printed {
                // the printed form needs a_{i+1}, which does not exist here
                return None;
            } else {
                let mut out = ab.clone();
                let s = ab.a(n - 3) + x;
                out.set_a(n - 3, s.clone());
                out.set_b(n - 2, ab.a(n - 3) * ab.b(n - 2) / &s);
                let xp = x * ab.b(n - 2) * ab.prod_b(1, n - 4) / &s;
                (out, xp)
            };
            let mut v = out.flat();
            v.push(xp);
            v
        }
        T2 => {
            let x = &p[0];
            let ab = Ab::split(&p[1..], la_t);
            let m = n - 3;
            let mut out = ab.clone();
            let mut big_b = vec![Rational::zero(); m + 1];
            big_b[m] = ab.b(m) + x;
            for k in (1..=m).rev() {
                let ak = ab.a(k) * ab.b(k) / &big_b[k];
                out.set_a(k, ak.clone());
                if k >= 2 {
                    big_b[k - 1] = ab.a(k) + ab.b(k - 1) - &ak;
                }
            }
            for (k, bk) in big_b.iter().enumerate().take(m + 1).skip(1) {
                out.set_b(k, bk.clone());
            }
            let xp = ab.a(1) - out.a(1);
            let mut v = out.flat();
            v.push(xp);
            v
        }
        T3 => {
            let x = &p[0];
            let ab = Ab::split(&p[1..], la_t);
            let mut out = ab.clone();
            let xp = if printed {
                let bl = ab.b(n - 2);
                out.set_b(n - 2, &bl + &bl / (ab.b(1) * x));
                x / inner_t_minor(&ab, n)
            } else {
                let pp = ab.prod_a(2, n - 3);
                let bl = ab.b(n - 2) + x / &pp;
                out.set_b(n - 2, bl.clone());
                out.set_b(1, ab.b(1) * ab.b(n - 2) / &bl);
                ab.b(1) * x / (&pp * &bl)
            };
            let mut v = out.flat();
            v.push(xp);
            v
        }
        Split => return None,
        ShortE | ShortF => vec![&p[0] + &p[1]],
        BraidE | BraidF => braid(p)?,
        CommuteE | CommuteF | CommuteEF => vec![p[1].clone(), p[0].clone()],
        ExchangeEF => {
            let d = &one + &p[0] * &p[1];
            vec![&p[1] / &d, d.clone(), &one / &d, &p[0] / &d]
        }
        HE | HF => vec![h_shift(id, inst, &p[1], &p[0], false), p[0].clone()],
        HH => vec![&p[0] * &p[1]],
    };
    Some(out)
}

/// `|T(a,b)_{[3,n-3],[4,n-2]}|`, 1 on the empty interval.
fn inner_t_minor(ab: &Ab, n: usize) -> Rational {
    if n < 6 {
        return Rational::one();
    }
    let t = t_matrix(&ab.a, &ab.b);
    t.minor(&IndexSet::interval(3, n - 3), &IndexSet::interval(4, n - 2)).expect("in range")
}

fn k3_printed(ab: &Ab, n: usize, i: usize, x: &Rational) -> Option<(Ab, Rational)> {
    let one = Rational::one();
    let mut out = ab.clone();
    if i < n - 2 {
        let ai1 = ab.a(i + 1);
        let s = &one + x * &ai1;
        let t = &s + x * ab.b(i);
        out.set_a(i, ab.a(i) * &s);
        out.set_a(i + 1, &ai1 * &t / &s);
        if i + 2 <= n - 2 {
            out.set_a(i + 2, ab.a(i + 2) / (&one + x * &ai1 + x * ab.b(i + 1)));
        }
        if i >= 2 {
            out.set_b(i - 1, ab.b(i - 1) * &t);
        }
        out.set_b(i, ab.b(i) / &s);
        out.set_b(i + 1, ab.b(i + 1) * &s / &t);
        Some((out, &one / t))
    } else {
        let t = &one + x * ab.b(n - 2);
        if n >= 4 {
            out.set_b(n - 3, ab.b(n - 3) * &t);
        }
        out.set_b(n - 1, ab.b(n - 1) / &t);
        Some((out, &one / t))
    }
}

fn k3_corrected(ab: &Ab, n: usize, i: usize, x: &Rational, main_text: bool) -> (Ab, Rational) {
    let one = Rational::one();
    let s = &one + x * ab.a0(i + 1);
    let t = &s + x * ab.b(i);
    let mut out = ab.clone();
    if main_text {
        out.mul_a(i, &s);
        out.mul_a(i + 1, &(&one / &s));
        if i >= 2 {
            out.mul_b(i - 1, &t);
        }
        out.mul_b(i, &(&one / (&s * &t)));
        out.mul_b(i + 1, &s);
        if i == 1 {
            out.mul_b(n - 1, &t);
        }
    } else {
        out.mul_a(i, &s);
        out.mul_a(i + 1, &(&t / &s));
        out.mul_a(i + 2, &(&one / &t));
        if i >= 2 {
            out.mul_b(i - 1, &t);
        }
        out.mul_b(i, &(&one / &s));
        out.mul_b(i + 1, &(&s / &t));
        if i == 1 {
            out.mul_b(n - 1, &t);
        }
        if i + 3 == n {
            out.mul_b(n - 1, &(&one / &t));
        }
    }
    (out, &one / t)
}

fn printed_backward(id: RuleId, inst: &RuleInstance, p: &[Rational]) -> Option<Vec<Rational>> {
    use RuleId::*;
    let n = inst.n;
    let i = inst.i;
    match id {
        K1 | T1 => {
            let la = if id == K1 { n - 2 } else { n - 3 };
            let big = Ab::split(&p[..p.len() - 1], la);
            let xp = p.last()?.clone();
            let mut out = big.clone();
            let boundary = if id == K1 { i == n - 2 } else { i == n - 3 };
            let x = if !boundary {
                let (ai, ai1, bi, bi1) = (big.a(i), big.a(i + 1), big.b(i), big.b(i + 1));
                let den = &ai1 * &bi1 + &ai1 * &xp + &bi * &xp;
                out.set_a(i, (&ai * &ai1 * &bi1 + &ai * &ai1 * &xp) / &den);
                out.set_a(i + 1, &ai1 + &bi * &xp / (&bi1 + &xp));
                out.set_b(i, &bi * &bi1 / (&bi1 + &xp));
                out.set_b(i + 1, &bi1 + &xp);
                &xp * &ai * &bi / den
            } else if id == K1 {
                let all = big.prod_b(1, n - 1);
                let den = &all + &xp * big.b(n - 2);
                out.set_a(n - 2, big.a(n - 2) * &all / &den);
                out.set_b(n - 1, big.b(n - 1) + &xp / big.prod_b(1, n - 3));
                big.a(n - 2) * big.b(n - 2) * &xp / den
            } else {
                return None;
            };
            let mut v = vec![x];
            v.extend(out.flat());
            Some(v)
        }
        K4 => {
            let big = Ab::split(&p[..2 * n - 3], n - 2);
            let xp = &p[2 * n - 3];
            let mut out = big.clone();
            let a1 = big.a(1) + big.a(1) * xp / big.b(1);
            out.set_a(1, a1.clone());
            // x is not printed; it follows from x' = x a_1 b_1.
            let x = xp / (&a1 * big.b(1));
            let mut v = vec![x];
            v.extend(out.flat());
            Some(v)
        }
        T3 => {
            let big = Ab::split(&p[..2 * n - 5], n - 3);
            let xp = &p[2 * n - 5];
            let mut out = big.clone();
            out.set_b(n - 2, big.b(n - 2) * big.b(1) / (big.b(1) + xp));
            let x = xp * inner_t_minor(&big, n);
            let mut v = vec![x];
            v.extend(out.flat());
            Some(v)
        }
        _ => None,
    }
}

/// Counts of one direction of a rule check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub checked: usize,
    pub passed: usize,
    pub first_failure: Option<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checked: 0, passed: 0, first_failure: None }
    }

    fn record(&mut self, ok: Result<(), String>) {
        self.checked += 1;
        match ok {
            Ok(()) => self.passed += 1,
            Err(msg) => {
                if self.first_failure.is_none() {
                    self.first_failure = Some(msg);
                }
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checked > 0 && self.passed == self.checked
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub rule: RuleId,
    pub statement: String,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub subtraction_free: bool,
    pub forward: Outcome,
    pub backward: Option<Outcome>,
    pub printed_forward: Option<Outcome>,
    pub printed_backward: Option<Outcome>,
    pub note: String,
}

impl VerificationReport {
    /// The verified transforms hold in both directions.
    pub fn passed(&self) -> bool {
        self.forward.all_passed() && self.backward.as_ref().is_none_or(Outcome::all_passed)
    }

    pub fn printed_holds(&self) -> Option<bool> {
        self.printed_forward.as_ref().map(Outcome::all_passed)
    }
}

fn show(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn check_pair(inst: &RuleInstance, left: &[Rational], right: Option<Vec<Rational>>) -> Result<(), String> {
    let ctx = || format!("i = {}, j = {}, left params {}", inst.i, inst.j, show(left));
    let right = right.ok_or_else(|| format!("transform undefined at {}", ctx()))?;
    let lw = ParamWord::unchecked(inst.left_word(), left.to_vec()).map_err(|e| e.to_string())?;
    let rw = ParamWord::unchecked(inst.right_word(), right.clone()).map_err(|e| format!("{e} at {}", ctx()))?;
    if right.iter().any(|x| !x.is_positive()) {
        return Err(format!("nonpositive output {} at {}", show(&right), ctx()));
    }
    if lw.evaluate() != rw.evaluate() {
        return Err(format!("products differ at {}, right params {}", ctx(), show(&right)));
    }
    Ok(())
}

fn check_back(inst: &RuleInstance, left: &[Rational], got: Option<Vec<Rational>>) -> Result<(), String> {
    match got {
        Some(v) if v == left => Ok(()),
        Some(v) => Err(format!("i = {}: expected {}, got {}", inst.i, show(left), show(&v))),
        None => Err(format!("i = {}: no preimage for left params {}", inst.i, show(left))),
    }
}

fn verify_split(n: usize, samples: usize, seed: u64) -> VerificationReport {
    let mut rng = prng(seed);
    let mut forward = Outcome::new();
    let mut counts = [0usize; 3];
    for s in 0..samples {
        let ab = positives(&mut rng, 2 * n - 5);
        let p = GeneratorParams::from_flat(Family::T, n, &ab).expect("valid draw");
        let v = positive(&mut rng);
        // every third draw lands on the boundary branch
        let u = if s % 3 == 0 { p.b.last().unwrap() * p.y() / &v } else { positive(&mut rng) };
        let lhs = crate::generators::chevalley_any(n, crate::generators::Chevalley::E, n - 1, &u)
            .times(&crate::generators::chevalley_any(n, crate::generators::Chevalley::E, n - 2, &v))
            .times(&p.matrix());
        let res = match cell_split(&u, &v, &p) {
            Ok((branch, pw)) => {
                counts[branch as usize] += 1;
                let minor = lhs.solid_minor(1, n - 1, 2, n);
                let sign_ok = match branch {
                    SplitBranch::Neg => minor.is_negative(),
                    SplitBranch::Zero => minor.is_zero(),
                    SplitBranch::Pos => minor.is_positive(),
                };
                if pw.evaluate() != lhs {
                    Err(format!("branch {branch:?} product differs at u = {u}, v = {v}, params {}", show(&ab)))
                } else if !sign_ok {
                    Err(format!("branch {branch:?} disagrees with the minor sign at u = {u}, v = {v}"))
                } else {
                    Ok(())
                }
            }
            Err(e) => Err(format!("{e} at u = {u}, v = {v}, params {}", show(&ab))),
        };
        forward.record(res);
    }
    let r = rule(RuleId::Split);
    VerificationReport {
        rule: RuleId::Split,
        statement: r.statement.into(),
        n,
        samples,
        seed,
        subtraction_free: false,
        forward,
        backward: None,
        printed_forward: None,
        printed_backward: None,
        note: format!("branches NEG/ZERO/POS seen {}/{}/{} times", counts[0], counts[1], counts[2]),
    }
}

/// Check a rule on `samples` random positive draws, cycling over its
/// instances at size `n`.
pub fn verify_rule(r: &RewriteRule, n: usize, samples: usize, seed: u64) -> VerificationReport {
    if r.id == RuleId::Split {
        return verify_split(n, samples, seed);
    }
    let insts = r.instances(n);
    let mut rng = prng(seed);
    let mut forward = Outcome::new();
    let mut backward = r.invertible.then(Outcome::new);
    let mut printed = r.has_printed().then(Outcome::new);
    let mut printed_back = r.has_printed_backward().then(Outcome::new);
    if !insts.is_empty() {
        for s in 0..samples {
            let inst = &insts[s % insts.len()];
            let count = inst.left_word().param_count();
            let left = positives(&mut rng, count);
            let right = r.forward(inst, &left);
            forward.record(check_pair(inst, &left, right.clone()));
            if let Some(out) = printed.as_mut() {
                out.record(check_pair(inst, &left, r.printed_forward(inst, &left)));
            }
            if let Some(right) = right.filter(|v| v.iter().all(Signed::is_positive)) {
                if let Some(out) = backward.as_mut() {
                    out.record(check_back(inst, &left, r.backward(inst, &right)));
                }
                if let Some(out) = printed_back.as_mut() {
                    out.record(check_back(inst, &left, r.printed_backward(inst, &right)));
                }
            }
        }
    }
    let mut note = r.note.to_string();
    if !r.invertible {
        note.push_str(if note.is_empty() { "not invertible" } else { "; not invertible" });
    }
    VerificationReport {
        rule: r.id,
        statement: r.statement.into(),
        n,
        samples,
        seed,
        subtraction_free: r.subtraction_free,
        forward,
        backward,
        printed_forward: printed,
        printed_backward: printed_back,
        note,
    }
}

/// Every rule legal at size `n`, filtered by mode when given.
pub fn verify_catalog(n: usize, samples: usize, seed: u64, mode: Option<Mode>) -> Vec<VerificationReport> {
    catalog()
        .iter()
        .filter(|r| mode.is_none_or(|m| m == r.mode) && !r.instances(n).is_empty())
        .enumerate()
        .map(|(k, r)| verify_rule(r, n, samples, seed.wrapping_add(k as u64)))
        .collect()
}

/// Rewrite the letters starting at `position`. The result is checked to
/// evaluate to the same matrix.
pub fn apply_rule(pw: &ParamWord, id: RuleId, position: usize, direction: Direction) -> Result<ParamWord, WordError> {
    let n = pw.n();
    let r = rule(id);
    let letters = &pw.word.letters;
    let offsets = pw.word.param_offsets();
    let (new_letters, new_params, end) = if id == RuleId::Split {
        if direction == Direction::Backward || position + 3 > letters.len() {
            return Err(WordError::PatternMismatch(position));
        }
        if letters[position..position + 3] != [Letter::E(n - 1), Letter::E(n - 2), Letter::T] {
            return Err(WordError::PatternMismatch(position));
        }
        let ps = &pw.params[offsets[position]..offsets[position + 3]];
        let p = GeneratorParams::from_flat(Family::T, n, &ps[2..]).map_err(|_| WordError::DomainViolation)?;
        let (_, out) = cell_split(&ps[0], &ps[1], &p)?;
        (out.word.letters, out.params, position + 3)
    } else {
        let inst = r
            .instances(n)
            .into_iter()
            .find(|inst| {
                let pat = if direction == Direction::Forward { &inst.left } else { &inst.right };
                letters.get(position..position + pat.len()) == Some(pat.as_slice())
            })
            .ok_or(WordError::PatternMismatch(position))?;
        let (from, to) = match direction {
            Direction::Forward => (&inst.left, &inst.right),
            Direction::Backward => (&inst.right, &inst.left),
        };
        let end = position + from.len();
        let ps = &pw.params[offsets[position]..offsets[end]];
        let out = match direction {
            Direction::Forward => r.forward(&inst, ps),
            Direction::Backward => r.backward(&inst, ps),
        }
        .ok_or(WordError::DomainViolation)?;
        (to.clone(), out, end)
    };
    let mut letters_out = letters[..position].to_vec();
    letters_out.extend(new_letters);
    letters_out.extend_from_slice(&letters[end..]);
    let mut params_out = pw.params[..offsets[position]].to_vec();
    params_out.extend(new_params);
    params_out.extend_from_slice(&pw.params[offsets[end]..]);
    let word = Word::new(n, pw.word.mode, letters_out)?;
    let result = ParamWord::new(word, params_out).map_err(|_| WordError::DomainViolation)?;
    if result.evaluate() != pw.evaluate() {
        return Err(WordError::Unsound);
    }
    Ok(result)
}
