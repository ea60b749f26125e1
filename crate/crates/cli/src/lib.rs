//! Harness around [`ubirate_core`]: configuration files with flag
//! overrides, parameter sweeps, Monte Carlo validation reports, and
//! figure-data CSV emission.
//!
//! The binary (`ubirate`) wires these modules to a clap CLI; the library
//! half exists so integration tests can drive the exact resolution and
//! report logic in-process.

pub mod config;
pub mod report;
