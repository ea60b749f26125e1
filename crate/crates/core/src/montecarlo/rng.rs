//! Counter-based per-trial randomness.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent, reproducible random stream for one trial.
///
/// The run seed selects the cipher key and the trial index selects the
/// stream, so every trial's randomness is a pure function of
/// `(seed, trial_index)`: trials can run in any order, on any number of
/// threads, or be replayed alone, and always see the same draws.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}
