//! Fixtures shared by the benchmarks.

use gmc_core::sampling::{random_state, trial_rng};
use gmc_core::GaussianState;

/// `count` scrambled random states with `modes` modes, fixed seed.
pub fn fixture_states(modes: usize, count: u32) -> Vec<GaussianState> {
    (0..count)
        .map(|i| random_state(&mut trial_rng(2024, modes as u32, i), modes))
        .collect()
}
