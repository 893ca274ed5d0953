//! Seed derivation. Every random stream in the crate is a ChaCha8 generator
//! keyed from a master seed and a stream index, so results are independent
//! of thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type StreamRng = ChaCha8Rng;

/// Trials handled by one sub-stream when sampling counts in parallel.
pub const BLOCK: u64 = 1 << 14;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of sub-stream `stream` from `seed`.
pub fn sub_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(stream.wrapping_add(0x632B_E59B_D9B4_E019)))
}

pub fn stream(seed: u64, index: u64) -> StreamRng {
    StreamRng::seed_from_u64(sub_seed(seed, index))
}

pub fn master(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}

/// Number of successes among `trials` Bernoulli(`p`) draws.
///
/// Trials are split into blocks of [`BLOCK`] draws, each with its own derived
/// stream; the total is a plain sum, so the count does not depend on how rayon
/// schedules the blocks.
pub fn bernoulli_count(p: f64, trials: u64, seed: u64) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    let blocks = trials.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK.min(trials - b * BLOCK);
            let mut rng = stream(seed, b);
            (0..len).filter(|_| rng.random::<f64>() < p).count() as u64
        })
        .sum()
}

/// Three standard deviations of a binomial proportion.
pub fn three_sigma(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_differ_and_repeat() {
        assert_ne!(sub_seed(1, 0), sub_seed(1, 1));
        assert_ne!(sub_seed(1, 0), sub_seed(2, 0));
        assert_eq!(sub_seed(9, 4), sub_seed(9, 4));
    }

    #[test]
    fn bernoulli_edges() {
        assert_eq!(bernoulli_count(0.0, 1000, 3), 0);
        assert_eq!(bernoulli_count(1.0, 1000, 3), 1000);
        assert_eq!(bernoulli_count(0.3, 50_000, 3), bernoulli_count(0.3, 50_000, 3));
    }

    #[test]
    fn bernoulli_concentrates() {
        let n = 200_000;
        let hits = bernoulli_count(0.25, n, 11) as f64 / n as f64;
        assert!((hits - 0.25).abs() <= three_sigma(0.25, n));
    }
}
