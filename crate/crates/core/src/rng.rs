//! Seeded random number generation.
//!
//! Every randomized operation in the crate draws from [`SeededRng`], ChaCha
//! with 8 rounds, seeded from a `u64`. ChaCha output is specified
//! independently of platform and word size, so a seed reproduces the same
//! selections and datasets everywhere. Normal deviates use the Box-Muller
//! transform on top of the uniform stream.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform index in `0..n`. Samples through `u64` so 32- and 64-bit targets
/// agree.
pub fn uniform_index(rng: &mut SeededRng, n: usize) -> usize {
    debug_assert!(n > 0);
    rng.gen_range(0..n as u64) as usize
}

/// `amount` distinct indices from `0..n`, in random order.
pub fn sample_without_replacement(rng: &mut SeededRng, n: usize, amount: usize) -> Vec<usize> {
    index::sample(rng, n, amount).into_vec()
}

/// Uniform in `(0, 1]`.
fn open_unit(rng: &mut SeededRng) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Standard normal deviates, produced in Box-Muller pairs.
#[derive(Debug)]
pub struct Normal {
    spare: Option<f64>,
}

impl Normal {
    pub fn new() -> Self {
        Self { spare: None }
    }

    pub fn sample(&mut self, rng: &mut SeededRng) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let r = (-2.0 * open_unit(rng).ln()).sqrt();
        let theta = std::f64::consts::TAU * rng.gen::<f64>();
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

impl Default for Normal {
    fn default() -> Self {
        Self::new()
    }
}
