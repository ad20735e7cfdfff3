//! Bounded breadth-first rewriting over h-free words. Moves are the
//! cell-level shadows of the relations: shortening (one way), braids,
//! commutations and moving letters through K or T. Used to cross-check
//! the structural canonical forms.

use std::collections::BTreeSet;

use super::{canonicalize, Granularity, Letter, Mode, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimit {
    /// Depth cap; `None` means three times the word length.
    pub max_depth: Option<usize>,
    pub max_nodes: usize,
}

impl Default for SearchLimit {
    fn default() -> Self {
        SearchLimit { max_depth: None, max_nodes: 200_000 }
    }
}

fn swap_pair(n: usize, mode: Mode, a: Letter, b: Letter) -> Vec<(Letter, Letter)> {
    use Letter::*;
    let mut out = Vec::new();
    match (a, b) {
        (E(i), E(j)) | (F(i), F(j)) if i.abs_diff(j) >= 2 => out.push((b, a)),
        (E(i), F(j)) | (F(j), E(i)) if mode == Mode::S => {
            let _ = (i, j);
            out.push((b, a));
        }
        _ => {}
    }
    match mode {
        Mode::S => match (a, b) {
            (E(i), K) if i + 1 < n => out.push((K, E(i + 1))),
            (K, E(j)) if j >= 2 => out.push((E(j - 1), K)),
            (E(i), K) => {
                debug_assert_eq!(i, n - 1);
                out.push((K, F(n - 1)));
            }
            (K, F(j)) if j == n - 1 => out.push((E(n - 1), K)),
            (F(i), K) if i >= 2 => out.push((K, F(i - 1))),
            (K, F(j)) => out.push((F(j + 1), K)),
            (F(1), K) => out.push((K, E(1))),
            (K, E(1)) => out.push((F(1), K)),
            _ => {}
        },
        Mode::T => match (a, b) {
            (E(i), T) if i + 3 <= n => out.push((T, E(i + 2))),
            (T, E(j)) if j >= 3 => out.push((E(j - 2), T)),
            (E(i), T) if i == n - 2 => out.push((T, E(1))),
            (E(_), T) => out.push((T, E(2))),
            (T, E(1)) => out.push((E(n - 2), T)),
            (T, E(_)) => out.push((E(n - 1), T)),
            _ => {}
        },
    }
    out
}

/// All words one move away, sorted and deduplicated.
pub fn moves(word: &Word) -> Vec<Word> {
    let (n, mode) = (word.n, word.mode);
    let w = &word.letters;
    let mut out = BTreeSet::new();
    let mut push = |letters: Vec<Letter>| {
        out.insert(Word { n, mode, letters });
    };
    for p in 0..w.len().saturating_sub(1) {
        let (a, b) = (w[p], w[p + 1]);
        if a == b && a.is_chevalley() {
            let mut next = w.clone();
            next.remove(p);
            push(next);
        }
        for (x, y) in swap_pair(n, mode, a, b) {
            let mut next = w.clone();
            next[p] = x;
            next[p + 1] = y;
            push(next);
        }
        if p + 2 < w.len() {
            let c = w[p + 2];
            let braid = match (a, b, c) {
                (Letter::E(i), Letter::E(j), Letter::E(k)) if i == k && i.abs_diff(j) == 1 => {
                    Some([Letter::E(j), Letter::E(i), Letter::E(j)])
                }
                (Letter::F(i), Letter::F(j), Letter::F(k)) if i == k && i.abs_diff(j) == 1 => {
                    Some([Letter::F(j), Letter::F(i), Letter::F(j)])
                }
                _ => None,
            };
            if let Some(r) = braid {
                let mut next = w.clone();
                next[p..p + 3].copy_from_slice(&r);
                push(next);
            }
        }
    }
    out.into_iter().collect()
}

fn depth_cap(word: &Word, limit: SearchLimit) -> usize {
    limit.max_depth.unwrap_or(3 * word.length().max(1))
}

/// Every word reachable from the h-free part of `word` within the limits.
pub fn reachable(word: &Word, limit: SearchLimit) -> BTreeSet<Word> {
    let start = word.without_h();
    let cap = depth_cap(&start, limit);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start];
    for _ in 0..cap {
        let mut next = Vec::new();
        for w in &frontier {
            for m in moves(w) {
                if seen.len() >= limit.max_nodes {
                    return seen;
                }
                if seen.insert(m.clone()) {
                    next.push(m);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

fn is_fixed_point(w: &Word) -> bool {
    canonicalize(w, Granularity::Fine).map(|c| c.without_h() == *w).unwrap_or(false)
}

/// The lexicographically least fine canonical word (without h letters) at
/// the smallest depth reached, or `None` within the limits.
pub fn search_canonical(word: &Word, limit: SearchLimit) -> Option<Word> {
    let start = word.without_h();
    if is_fixed_point(&start) {
        return Some(start);
    }
    let cap = depth_cap(&start, limit);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut frontier = BTreeSet::from([start]);
    for _ in 0..cap {
        let mut next = BTreeSet::new();
        for w in &frontier {
            for m in moves(w) {
                if seen.len() >= limit.max_nodes {
                    return None;
                }
                if seen.insert(m.clone()) {
                    next.insert(m);
                }
            }
        }
        if let Some(hit) = next.iter().find(|w| is_fixed_point(w)) {
            return Some(hit.clone());
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_agrees_with_structure() {
        for (n, mode, text) in [
            (3, Mode::S, "e1 K"),
            (3, Mode::S, "e2 e1 K"),
            (3, Mode::S, "K e2 f1"),
            (3, Mode::S, "e1 e2 e1 e2"),
            (4, Mode::T, "T e1"),
            (4, Mode::T, "e1 T e3"),
            (5, Mode::T, "e1 e2 e1 e2"),
        ] {
            let w = Word::parse(n, mode, text).unwrap();
            let want = canonicalize(&w, Granularity::Fine).unwrap().without_h();
            assert_eq!(search_canonical(&w, SearchLimit::default()), Some(want), "{text}");
        }
    }

    #[test]
    fn shortening_is_one_way() {
        let w = Word::parse(3, Mode::S, "e1 e1").unwrap();
        assert!(moves(&w).iter().any(|m| m.to_string() == "e1"));
        let r = reachable(&Word::parse(3, Mode::S, "e1").unwrap(), SearchLimit::default());
        assert_eq!(r.len(), 1);
    }
}
