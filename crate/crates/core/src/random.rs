//! Seeded generators for property sweeps.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraParams, Element, Monomial, Word};
use crate::numbers::{coeff, rat, Coeff};

pub const DEFAULT_SEED: u64 = 0x5eed_0f0a;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn word<R: Rng>(rng: &mut R, n: u32, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word((0..len).map(|_| rng.gen_range(1..=n)).collect())
}

pub fn monomial<R: Rng>(rng: &mut R, params: AlgebraParams, max_len: usize, max_k: i64) -> Monomial {
    Monomial {
        mu: word(rng, params.n, max_len),
        k: rng.gen_range(-max_k..=max_k),
        nu: word(rng, params.n, max_len),
    }
}

/// Small nonzero Gaussian rational.
pub fn coefficient<R: Rng>(rng: &mut R) -> Coeff {
    loop {
        let re = rat(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        let im = if rng.gen_bool(0.3) { rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)) } else { rat(0, 1) };
        let c = coeff(re, im);
        if !crate::numbers::coeff_is_zero(&c) {
            return c;
        }
    }
}

pub fn element<R: Rng>(rng: &mut R, params: AlgebraParams, terms: usize, max_len: usize, max_k: i64) -> Element {
    Element::from_terms((0..terms).map(|_| (monomial(rng, params, max_len, max_k), coefficient(rng))))
}
