use std::collections::HashSet;

use kpos::cells::{classify, enumerate_cells, factor, sample_cell_random, CellMode};
use kpos::exact::Matrix;
use kpos::random::{positives, prng};
use kpos::words::{canonicalize, Granularity, Letter, Mode, ParamWord, Word};
use rand::Rng;

fn closed_loop(n: usize, mode: CellMode, g: Granularity, draws: usize) {
    let cells = enumerate_cells(n, mode, g).unwrap();
    let words: HashSet<_> = cells.iter().map(|c| c.word.clone()).collect();
    assert_eq!(words.len(), cells.len(), "duplicates");
    let mut rng = prng(11);
    for cell in &cells {
        assert_eq!(canonicalize(&cell.word, g).unwrap(), cell.word, "not a fixed point: {cell}");
        for _ in 0..draws {
            let m = sample_cell_random(cell, &mut rng);
            let got = classify(&m, mode, g).unwrap_or_else(|e| panic!("{cell}: {e}"));
            assert_eq!(got, *cell, "sample of {cell} classified as {got}");
        }
    }
}

#[test]
fn n1_partition_n3() {
    closed_loop(3, CellMode::N1, Granularity::Fine, 10);
}

#[test]
fn n1_partition_n4() {
    closed_loop(4, CellMode::N1, Granularity::Fine, 1);
}

#[test]
fn n2u_partition() {
    closed_loop(4, CellMode::N2U, Granularity::Fine, 10);
    closed_loop(4, CellMode::N2U, Granularity::Coarse, 10);
    closed_loop(5, CellMode::N2U, Granularity::Fine, 2);
    closed_loop(5, CellMode::N2U, Granularity::Coarse, 2);
}

fn random_word(rng: &mut kpos::random::Prng, n: usize, mode: Mode) -> Word {
    let len = rng.gen_range(0..=8);
    let mut letters = Vec::new();
    let gen_at = if rng.gen_bool(0.7) { Some(rng.gen_range(0..=len)) } else { None };
    for p in 0..=len {
        if gen_at == Some(p) {
            letters.push(if mode == Mode::S { Letter::K } else { Letter::T });
        }
        if p == len {
            break;
        }
        let i = rng.gen_range(1..n);
        letters.push(match (mode, rng.gen_range(0..3)) {
            (Mode::T, _) | (Mode::S, 0) => Letter::E(i),
            (Mode::S, 1) => Letter::F(i),
            _ => Letter::H(rng.gen_range(1..=n)),
        });
    }
    Word::new(n, mode, letters).unwrap()
}

fn factor_round_trip(mode: Mode, g: Granularity) {
    let mut rng = prng(5);
    let mut done = 0;
    while done < 100 {
        let n = rng.gen_range(if mode == Mode::S { 3 } else { 4 }..=5);
        let w = random_word(&mut rng, n, mode);
        let pw = ParamWord::new(w.clone(), positives(&mut rng, w.param_count())).unwrap();
        let m: Matrix = pw.evaluate();
        let cm = if mode == Mode::S { CellMode::N1 } else { CellMode::N2U };
        let cell = classify(&m, cm, g).unwrap_or_else(|e| panic!("{w}: {e}"));
        if let Ok(c) = canonicalize(&w, g) {
            assert_eq!(c, cell.word, "structural canonical form of {w}");
        }
        let f = factor(&m, cm, g).unwrap_or_else(|e| panic!("factor {w}: {e}"));
        assert_eq!(f.evaluate(), m);
        assert_eq!(canonicalize(&f.word, g).unwrap(), cell.word, "factor of {w} gave {f}");
        done += 1;
    }
}

#[test]
fn factor_round_trip_s() {
    factor_round_trip(Mode::S, Granularity::Fine);
}

#[test]
fn factor_round_trip_t() {
    factor_round_trip(Mode::T, Granularity::Fine);
    factor_round_trip(Mode::T, Granularity::Coarse);
}
