//! Seeded random inputs for property checks. ChaCha8 keeps streams stable across platforms.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::ExactScalar;

pub type Prng = ChaCha8Rng;

pub fn prng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// p/q with |p| ≤ 5, 1 ≤ q ≤ 4.
pub fn small_rational(rng: &mut Prng) -> ExactScalar {
    ExactScalar::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

pub fn small_int(rng: &mut Prng, bound: i64) -> ExactScalar {
    ExactScalar::from_int(rng.gen_range(-bound..=bound))
}

/// A field element with small rational coordinates on 1, j and i.
pub fn small_scalar(rng: &mut Prng) -> ExactScalar {
    let a = small_rational(rng);
    let b = small_rational(rng) * ExactScalar::j();
    let c = if rng.gen_bool(0.5) { small_rational(rng) * ExactScalar::i() } else { ExactScalar::zero() };
    a + b + c
}

/// A field element with arbitrary small coordinates in all eight slots.
pub fn generic_scalar(rng: &mut Prng) -> ExactScalar {
    let coeffs = std::array::from_fn(|_| rng.gen_range(-4..=4));
    ExactScalar::from_int_coeffs(coeffs) * ExactScalar::from_ratio(1, rng.gen_range(1..=3))
}

pub fn nonzero_scalar(rng: &mut Prng) -> ExactScalar {
    loop {
        let x = small_scalar(rng);
        if !x.is_zero() {
            return x;
        }
    }
}
