//! Seeded draws of exact rationals.

use num::{BigInt, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{Matrix, Rational};

pub type Prng = ChaCha8Rng;

pub fn prng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Numerator and denominator uniform in `[1, 10]`.
pub fn positive(rng: &mut Prng) -> Rational {
    let p: i64 = rng.gen_range(1..=10);
    let q: i64 = rng.gen_range(1..=10);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn positives(rng: &mut Prng, count: usize) -> Vec<Rational> {
    (0..count).map(|_| positive(rng)).collect()
}

/// Numerator uniform in `[-10, 10]`, denominator in `[1, 10]`.
pub fn signed(rng: &mut Prng) -> Rational {
    let p: i64 = rng.gen_range(-10..=10);
    let q: i64 = rng.gen_range(1..=10);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn signed_matrix(rng: &mut Prng, n: usize) -> Matrix {
    let rows = (0..n).map(|_| (0..n).map(|_| signed(rng)).collect()).collect();
    Matrix::from_rows(rows).expect("square")
}

/// A nonzero signed draw.
pub fn nonzero(rng: &mut Prng) -> Rational {
    loop {
        let r = signed(rng);
        if !r.is_zero() {
            return r;
        }
    }
}
