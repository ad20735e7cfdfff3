//! Exact parameter recovery: given a word shape and a matrix, find the
//! parameters (if any) that make the word evaluate to the matrix.

use std::collections::BTreeMap;

use num::{One, Signed};

use super::{Letter, ParamWord, Word};
use crate::cells::{peel_chevalley, Side};
use crate::exact::{Matrix, Rational};
use crate::generators::{read_off_k, read_off_t, Chevalley, Family};

fn chevalley_kind(l: Letter) -> Option<(Chevalley, usize)> {
    match l {
        Letter::E(i) => Some((Chevalley::E, i)),
        Letter::F(i) => Some((Chevalley::F, i)),
        _ => None,
    }
}

/// Diagonal of the running product of h letters, 1-based with slot 0 unused.
fn diag_after(n: usize, hs: &[(usize, Rational)]) -> Vec<Rational> {
    let mut d = vec![Rational::one(); n + 1];
    for (j, x) in hs {
        d[*j] *= x;
    }
    d
}

/// Chevalley letters are peeled greedily (left part from the left, right
/// part from the right) after moving h letters next to the K/T letter; the
/// residue is read off as diagonal, D K D or T. Returns `None` when the
/// shape cannot produce `m` or the parameters are not unique.
pub fn solve(word: &Word, m: &Matrix) -> Option<ParamWord> {
    let n = word.n;
    if m.n_rows() != n || !m.is_square() || word.generator_count() > 1 {
        return None;
    }
    let gpos = word.letters.iter().position(|l| l.is_generator());
    let family = word.family();
    let k = match family {
        Some(Family::K) => n - 1,
        Some(Family::T) => n - 2,
        None => n,
    };
    let split = gpos.unwrap_or(word.letters.len());
    let left = &word.letters[..split];
    let right = if gpos.is_some() { &word.letters[split + 1..] } else { &[][..] };

    let h_slots = |part: &[Letter]| -> Option<Vec<usize>> {
        let mut seen = Vec::new();
        for l in part {
            if let Letter::H(j) = l {
                if seen.contains(j) {
                    return None;
                }
                seen.push(*j);
            }
        }
        Some(seen)
    };
    let lh = h_slots(left)?;
    let rh = h_slots(right)?;

    let mut cur = m.clone();
    let mut lvals = Vec::new();
    for l in left.iter().filter_map(|l| chevalley_kind(*l)) {
        let (x, next) = peel_chevalley(&cur, Side::Left, l.0, l.1, k)?;
        if !x.is_positive() {
            return None;
        }
        lvals.push(x);
        cur = next;
    }
    let mut rvals = Vec::new();
    for l in right.iter().rev().filter_map(|l| chevalley_kind(*l)) {
        let (x, next) = peel_chevalley(&cur, Side::Right, l.0, l.1, k)?;
        if !x.is_positive() {
            return None;
        }
        rvals.push(x);
        cur = next;
    }
    rvals.reverse();

    // Residue N = D_L X D_R.
    let mut dl: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut dr: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut gen_params: Vec<Rational> = Vec::new();
    match family {
        None => {
            if !cur.is_diagonal() {
                return None;
            }
            for j in 1..=n {
                let d = cur.get(j, j).clone();
                match (lh.contains(&j), rh.contains(&j)) {
                    (true, true) => return None,
                    (true, false) => {
                        dl.insert(j, d);
                    }
                    (false, true) => {
                        dr.insert(j, d);
                    }
                    (false, false) if d.is_one() => {}
                    _ => return None,
                }
            }
        }
        Some(fam) => {
            if fam == Family::K && (lh.contains(&1) || rh.contains(&n)) {
                return None;
            }
            if fam == Family::K {
                for j in 1..n {
                    let e = cur.get(j + 1, j).clone();
                    match (lh.contains(&(j + 1)), rh.contains(&j)) {
                        (true, true) => return None,
                        (true, false) => {
                            dl.insert(j + 1, e);
                        }
                        (false, true) => {
                            dr.insert(j, e);
                        }
                        (false, false) => {}
                    }
                }
            } else if !lh.is_empty() || !rh.is_empty() {
                return None;
            }
            let mut core = cur.clone();
            for (j, d) in &dl {
                if !d.is_positive() {
                    return None;
                }
                core.scale_row(*j, &(Rational::one() / d));
            }
            for (j, d) in &dr {
                if !d.is_positive() {
                    return None;
                }
                core.scale_col(*j, &(Rational::one() / d));
            }
            let p = match fam {
                Family::K => read_off_k(&core)?,
                Family::T => read_off_t(&core)?,
            };
            gen_params = p.flat();
        }
    }

    // Undo the h normalization letter by letter.
    let mut params = Vec::with_capacity(word.param_count());
    let mut seen_h: Vec<(usize, Rational)> = Vec::new();
    let mut lv = lvals.into_iter();
    for l in left {
        match *l {
            Letter::H(j) => {
                let d = dl.get(&j)?.clone();
                params.push(d.clone());
                seen_h.push((j, d));
            }
            Letter::E(i) | Letter::F(i) => {
                let d = diag_after(n, &seen_h);
                let y = lv.next()?;
                let x = if matches!(l, Letter::E(_)) { y * &d[i + 1] / &d[i] } else { y * &d[i] / &d[i + 1] };
                params.push(x);
            }
            _ => unreachable!("generator letters are split off"),
        }
    }
    if gpos.is_some() {
        params.extend(gen_params);
        let mut rv = rvals.into_iter();
        for (p, l) in right.iter().enumerate() {
            match *l {
                Letter::H(j) => params.push(dr.get(&j)?.clone()),
                Letter::E(i) | Letter::F(i) => {
                    let later: Vec<(usize, Rational)> = right[p + 1..]
                        .iter()
                        .filter_map(|l| match l {
                            Letter::H(j) => Some((*j, dr[j].clone())),
                            _ => None,
                        })
                        .collect();
                    let d = diag_after(n, &later);
                    let y = rv.next()?;
                    let x = if matches!(l, Letter::E(_)) { y * &d[i] / &d[i + 1] } else { y * &d[i + 1] / &d[i] };
                    params.push(x);
                }
                _ => unreachable!("one generator letter at most"),
            }
        }
    }
    let pw = ParamWord::new(word.clone(), params).ok()?;
    (pw.evaluate() == *m).then_some(pw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::random::{positives, prng};
    use crate::words::Mode;

    fn round_trip(n: usize, mode: Mode, text: &str, seed: u64) {
        let word = Word::parse(n, mode, text).unwrap();
        let mut rng = prng(seed);
        let pw = ParamWord::new(word.clone(), positives(&mut rng, word.param_count())).unwrap();
        let got = solve(&word, &pw.evaluate()).unwrap_or_else(|| panic!("no solution for {text}"));
        assert_eq!(got, pw, "{text}");
    }

    #[test]
    fn recovers_parameters() {
        round_trip(3, Mode::S, "f2 h1 h2 h3 e1 e2", 1);
        round_trip(3, Mode::S, "f2 h2 h3 e1 f1 e2 K", 2);
        round_trip(4, Mode::S, "h3 K f1 h1", 3);
        round_trip(4, Mode::S, "K e2", 4);
        round_trip(5, Mode::T, "e1 e3 e4 T", 5);
        round_trip(4, Mode::T, "T e3 e1", 6);
    }

    #[test]
    fn ambiguous_shapes() {
        let k = ParamWord::new(Word::parse(3, Mode::S, "K").unwrap(), vec![int(1), int(2), rat(1, 3)]).unwrap();
        assert!(solve(&Word::parse(3, Mode::S, "h1 K").unwrap(), &k.evaluate()).is_none());
        assert!(solve(&Word::parse(3, Mode::S, "e1").unwrap(), &k.evaluate()).is_none());
    }
}
