//! Reliability and ubiquitous-rate analysis of frequency reuse in Poisson
//! cellular downlinks.
//!
//! A downlink network is modeled as two independent homogeneous Poisson
//! point processes, one for base stations and one for users, with
//! nearest-BS association, distance path loss with exponent `alpha > 2`,
//! and unit-mean Rayleigh power fading. The library answers one question
//! for three channel-sharing schemes: what average rate can be delivered
//! *everywhere*, i.e. with SIR reliability at least `eta`?
//!
//! The schemes ([`Scheme`]):
//!
//! * baseline: every BS serves all its users on the whole band;
//! * BS-specific reuse (`frb`): each BS picks one of `M` channels uniformly
//!   at random and serves all its users there;
//! * user-specific reuse (`fru`): each user independently gets one of `M`
//!   channels.
//!
//! Reuse thins the interferer field (raising reliability) but splits the
//! band `M` ways (shrinking the allocation); the rate-optimal `M` balances
//! the two. The crate provides:
//!
//! * [`hypergeometric`]: the Gauss-hypergeometric coverage kernel the
//!   closed forms rest on, with certified series evaluation;
//! * [`model`]: closed-form reliability with algebraic bounds, threshold
//!   inversion, and the ubiquitous rate of each scheme;
//! * [`optimizer`]: exhaustive and first-order-surrogate search for the
//!   rate-optimal channel count, plus asymptotic regime classification;
//! * [`montecarlo`]: a ground-truth simulator that samples the actual
//!   point processes and measures coverage, allocation, and occupancy
//!   empirically, with reproducible counter-based randomness.
//!
//! Densities are per abstract unit area; only ratios such as
//! `lambda_u / lambda_b` matter analytically, and the simulator windows
//! scale accordingly.

pub mod error;
pub mod hypergeometric;
pub mod model;
pub mod montecarlo;
pub mod optimizer;

pub use error::{Error, Result};
pub use hypergeometric::CoverageArgs;
pub use model::{
    NetworkParams, ReliabilityResult, Scheme, SchemeDerived, SchemeKind, ThresholdMode,
};
pub use montecarlo::{CoverageEstimate, Estimate, Point, Realization, SimConfig};
pub use optimizer::{MRegime, OptimizationResult, SearchMethod};
