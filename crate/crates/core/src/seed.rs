//! Deterministic seed derivation.
//!
//! Every trial owns its random state, derived from the scenario seed and its grid
//! coordinates, so results do not depend on execution order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random streams used inside a single trial. Kept separate so that adding a consumer of
/// one stream never shifts the draws of another (paired-seed comparisons rely on this).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Noise = 1,
    Phase = 2,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a base seed with a list of coordinates into a new 64-bit seed.
pub fn derive(seed: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(splitmix64(seed), |acc, &c| splitmix64(acc ^ splitmix64(c)))
}

/// Seed of trial `trial` at grid point `point`.
pub fn trial_seed(seed: u64, point: usize, trial: usize) -> u64 {
    derive(seed, &[point as u64, trial as u64])
}

pub fn rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, &[stream as u64]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable_and_distinct() {
        assert_eq!(trial_seed(7, 1, 2), trial_seed(7, 1, 2));
        assert_ne!(trial_seed(7, 1, 2), trial_seed(7, 2, 1));
        assert_ne!(trial_seed(7, 0, 0), trial_seed(8, 0, 0));
    }
}
