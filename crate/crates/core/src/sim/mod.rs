//! Monte Carlo simulation of on-off FSK signaling over correlated Rayleigh fading.

mod estimator;
mod fading;
mod input;

pub use estimator::{estimate_mi, estimate_mi_ds, hypothesis_covariance, MiEstimate, MIN_TRIALS};
pub use fading::{complex_noise, sample_fading_block, standard_complex_normal, FadingSampler};
pub use input::{sample_input_block, Duty, Hypothesis, InputBlock, InputScheme, PhaseOption, SchemeMode};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream for trial `index`: the ChaCha key comes from
/// `master_seed` and the stream id is the trial index, so each trial's draws
/// depend only on `(master_seed, index)`.
pub fn trial_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}
