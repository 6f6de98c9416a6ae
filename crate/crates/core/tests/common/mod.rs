#![allow(dead_code)]

pub mod tables;

use qdeform::qalgebra::pentagon_admissible;
use qdeform::{Spin, Truncation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` admissible pentagon tuples drawn uniformly by rejection.
pub fn random_pentagon_tuples(trunc: Truncation, n: usize, seed: u64) -> Vec<[Spin; 9]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let j: [Spin; 9] = std::array::from_fn(|_| Spin::from_twice(rng.gen_range(0..=trunc.k())));
        if pentagon_admissible(j, trunc) {
            out.push(j);
        }
    }
    out
}
