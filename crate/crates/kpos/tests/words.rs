use kpos::cells::{classify, CellMode};
use kpos::random::{positives, prng};
use kpos::words::{canonicalize, search_canonical, Granularity, Letter, Mode, ParamWord, SearchLimit, Word};
use proptest::prelude::*;

fn letter(n: usize, mode: Mode) -> impl Strategy<Value = Letter> {
    let e = (1..n).prop_map(Letter::E);
    match mode {
        Mode::S => prop_oneof![e, (1..n).prop_map(Letter::F)].boxed(),
        Mode::T => e.boxed(),
    }
}

/// Words with at most one generator letter.
fn word(n: usize, mode: Mode, max_len: usize) -> impl Strategy<Value = Word> {
    let gen = if mode == Mode::S { Letter::K } else { Letter::T };
    (prop::collection::vec(letter(n, mode), 0..=max_len), any::<bool>(), any::<prop::sample::Index>()).prop_map(
        move |(mut letters, with_gen, at)| {
            if with_gen || letters.is_empty() {
                let i = at.index(letters.len() + 1);
                letters.insert(i, gen);
            }
            Word::new(n, mode, letters).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_is_idempotent_s(w in word(3, Mode::S, 6)) {
        let c = canonicalize(&w, Granularity::Fine).unwrap();
        prop_assert_eq!(canonicalize(&c, Granularity::Fine).unwrap(), c);
    }

    #[test]
    fn search_matches_structure_s(w in word(3, Mode::S, 5)) {
        let c = canonicalize(&w, Granularity::Fine).unwrap().without_h();
        let found = search_canonical(&w, SearchLimit { max_depth: None, max_nodes: 20_000 });
        prop_assert_eq!(found, Some(c));
    }

    #[test]
    fn search_matches_structure_t(w in word(4, Mode::T, 5)) {
        // Words that need the cell-split cannot be canonicalized structurally.
        if let Ok(c) = canonicalize(&w, Granularity::Fine) {
            let found = search_canonical(&w, SearchLimit { max_depth: None, max_nodes: 20_000 });
            prop_assert_eq!(found, Some(c.without_h()));
        }
    }

    #[test]
    fn evaluation_lands_in_canonical_cell(w in word(4, Mode::T, 6), seed in 0u64..1000) {
        if let Ok(c) = canonicalize(&w, Granularity::Fine) {
            let m = ParamWord::new(w.clone(), positives(&mut prng(seed), w.param_count())).unwrap().evaluate();
            prop_assert_eq!(classify(&m, CellMode::N2U, Granularity::Fine).unwrap().word, c);
        }
    }
}
