//! Seeding conventions.
//!
//! Every random object is drawn from a `ChaCha8Rng` built with
//! `seed_from_u64`. Derived seeds use [`derive`], a splitmix64 finalizer
//! applied to the parent seed and a stream label, so a trial's randomness
//! depends only on `(master_seed, labels...)` and never on scheduling.
//! Gaussians use the ziggurat sampler of `rand_distr::StandardNormal`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type Rng = ChaCha8Rng;

/// splitmix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Child seed for stream `label` of `seed`.
pub fn derive(seed: u64, label: u64) -> u64 {
    splitmix64(seed ^ splitmix64(label))
}

/// Seed of trial `trial` in grid cell `cell`.
pub fn trial_seed(master: u64, cell: u64, trial: u64) -> u64 {
    derive(derive(master, cell), trial)
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[inline]
pub fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Labels for the independent streams used by one trial.
pub mod stream {
    pub const SIGNALS: u64 = 1;
    pub const INSTANCE: u64 = 2;
    pub const NULL: u64 = 3;
    pub const TRANSFORM: u64 = 4;
    pub const PERMUTATION: u64 = 5;
}
