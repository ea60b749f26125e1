//! Shared fixtures for the benchmark suite.

use ubirate_core::model::{NetworkParams, Scheme};
use ubirate_core::montecarlo::SimConfig;

/// Mid-load network at the documented defaults.
pub fn default_params() -> NetworkParams {
    NetworkParams::new(1.0, 10.0, 4.0, 100e6, 0.99).unwrap()
}

/// Same network off the closed-form-friendly exponent.
pub fn odd_alpha_params() -> NetworkParams {
    NetworkParams::new(1.0, 10.0, 3.7, 100e6, 0.99).unwrap()
}

pub fn frb4() -> Scheme {
    Scheme::frb(4).unwrap()
}

/// Small but honest simulation: every per-trial stage (geometry,
/// association, channels, fading, interference) at a realistic scale.
pub fn small_sim() -> SimConfig {
    SimConfig {
        window_radius: 8.0,
        trials: 8,
        seed: 1,
        target_rel_truncation: 1.0,
    }
}
