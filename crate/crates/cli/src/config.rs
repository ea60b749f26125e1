//! Config file schema, defaults, and CLI flag overrides.
//!
//! Precedence per key is flag > file > default. Every key is optional;
//! an empty or absent file yields the documented defaults below. Files
//! are TOML with one section per concern: `[network]`, `[scheme]`,
//! `[sim]`, `[sweep]`. Unknown keys are rejected so typos surface as
//! errors (with the offending line) instead of silently falling back to
//! a default.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use ubirate_core::model::{NetworkParams, Scheme, SchemeKind, ThresholdMode};
use ubirate_core::montecarlo::{SimConfig, DEFAULT_REL_TRUNCATION};

use crate::report::{log_grid, OutputColumn, SweepSpec, SweepVariable};

pub const DEFAULT_LAMBDA_B: f64 = 1.0;
/// High enough (occupancy 0.991) that the closed form's independent
/// thinning nearly matches the simulator's geometry-correlated BS
/// activity, so default `validate` runs are not dominated by model error.
pub const DEFAULT_LAMBDA_U: f64 = 10.0;
pub const DEFAULT_ALPHA: f64 = 4.0;
/// 100 MHz.
pub const DEFAULT_BANDWIDTH_HZ: f64 = 100e6;
pub const DEFAULT_ETA: f64 = 0.99;
/// Enough trials that the 95% interval half-width sits below the
/// absolute validation tolerance, so `validate` at the defaults is gated
/// by the fixed tolerance rather than by Monte Carlo noise.
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_THRESHOLDS: [f64; 3] = [0.1, 1.0, 10.0];
/// Reuse factor assumed when a reuse scheme is named without an `m`.
pub const DEFAULT_M: u32 = 2;
pub const DEFAULT_M_MAX_FRB: u32 = 1024;
pub const DEFAULT_M_MAX_FRU: u32 = 4096;
/// Points in the default sweep grid.
pub const DEFAULT_GRID_POINTS: usize = 25;

/// Parsed config file; every field optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub network: NetworkSection,
    #[serde(default)]
    pub scheme: SchemeSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub lambda_b: Option<f64>,
    pub lambda_u: Option<f64>,
    pub alpha: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    pub eta: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    /// `baseline`, `frb`, or `fru` (case-insensitive).
    pub kind: Option<String>,
    pub m: Option<u32>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    /// Sampling window radius; 0 or absent picks the automatic radius.
    pub window_radius: Option<f64>,
    pub target_rel_truncation: Option<f64>,
    pub thresholds: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// `lambda_b`, `eta`, or `alpha`.
    pub variable: Option<String>,
    pub grid: Option<Vec<f64>>,
    pub schemes: Option<Vec<String>>,
    pub outputs: Option<Vec<String>>,
    pub m_max_frb: Option<u32>,
    pub m_max_fru: Option<u32>,
    /// `closed-form` or `numeric`.
    pub threshold_mode: Option<String>,
}

/// Flag overrides shared by every subcommand; each maps onto one config
/// key.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// Reliability target in (0, 1)
    #[arg(long)]
    pub eta: Option<f64>,
    /// Path loss exponent in (2, 8]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// BS density per unit area
    #[arg(long)]
    pub lambda_b: Option<f64>,
    /// User density per unit area
    #[arg(long)]
    pub lambda_u: Option<f64>,
    /// Total bandwidth in Hz
    #[arg(long)]
    pub bandwidth_hz: Option<f64>,
    /// Scheme kind: baseline, frb, or fru
    #[arg(long)]
    pub scheme: Option<String>,
    /// Reuse factor for frb/fru
    #[arg(long)]
    pub m: Option<u32>,
    /// Monte Carlo trials
    #[arg(long)]
    pub trials: Option<u64>,
    /// Run seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sampling window radius (0 = automatic)
    #[arg(long)]
    pub window_radius: Option<f64>,
    /// Comma-separated SIR thresholds, strictly increasing
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Option<Vec<f64>>,
    /// Threshold inversion mode: closed-form or numeric
    #[arg(long)]
    pub threshold_mode: Option<String>,
    /// Search cap applied to both reuse kinds
    #[arg(long)]
    pub m_max: Option<u32>,
}

/// Everything a subcommand needs, fully validated.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub params: NetworkParams,
    pub scheme: Scheme,
    pub sim: SimConfig,
    pub thresholds: Vec<f64>,
    pub threshold_mode: ThresholdMode,
    pub sweep: SweepSpec,
}

/// Reads and parses a config file; parse errors carry the TOML line
/// diagnostics.
pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

pub fn parse_scheme_kind(token: &str) -> Result<SchemeKind> {
    match token.to_ascii_lowercase().as_str() {
        "baseline" => Ok(SchemeKind::Baseline),
        "frb" => Ok(SchemeKind::FrB),
        "fru" => Ok(SchemeKind::FrU),
        other => bail!("unknown scheme kind {other:?} (expected baseline, frb, or fru)"),
    }
}

pub fn parse_threshold_mode(token: &str) -> Result<ThresholdMode> {
    match token.to_ascii_lowercase().as_str() {
        "closed-form" | "closed_form" => Ok(ThresholdMode::ClosedForm),
        "numeric" => Ok(ThresholdMode::ExactNumeric),
        other => bail!("unknown threshold mode {other:?} (expected closed-form or numeric)"),
    }
}

fn validated_thresholds(values: Vec<f64>) -> Result<Vec<f64>> {
    if values.is_empty() {
        bail!("thresholds must be nonempty");
    }
    for pair in values.windows(2) {
        if !(pair[0] < pair[1]) {
            bail!("thresholds must be strictly increasing, got {values:?}");
        }
    }
    if !values.iter().all(|t| t.is_finite() && *t > 0.0) {
        bail!("thresholds must be finite and positive, got {values:?}");
    }
    Ok(values)
}

/// Merges defaults, file, and flags into a validated [`Resolved`].
pub fn resolve(file: &FileConfig, ov: &Overrides) -> Result<Resolved> {
    let params = NetworkParams::new(
        ov.lambda_b.or(file.network.lambda_b).unwrap_or(DEFAULT_LAMBDA_B),
        ov.lambda_u.or(file.network.lambda_u).unwrap_or(DEFAULT_LAMBDA_U),
        ov.alpha.or(file.network.alpha).unwrap_or(DEFAULT_ALPHA),
        ov.bandwidth_hz
            .or(file.network.bandwidth_hz)
            .unwrap_or(DEFAULT_BANDWIDTH_HZ),
        ov.eta.or(file.network.eta).unwrap_or(DEFAULT_ETA),
    )
    .context("invalid network parameters")?;

    let kind_token = ov
        .scheme
        .clone()
        .or_else(|| file.scheme.kind.clone())
        .unwrap_or_else(|| "baseline".to_string());
    let kind = parse_scheme_kind(&kind_token)?;
    let scheme = match kind {
        // The baseline has no reuse factor; an `m` key is irrelevant to it.
        SchemeKind::Baseline => Scheme::baseline(),
        _ => Scheme::new(kind, ov.m.or(file.scheme.m).unwrap_or(DEFAULT_M))
            .context("invalid scheme")?,
    };

    let window_radius = match ov.window_radius.or(file.sim.window_radius) {
        None => SimConfig::default_window_radius(&params),
        Some(r) if r == 0.0 => SimConfig::default_window_radius(&params),
        Some(r) if r.is_finite() && r > 0.0 => r,
        Some(r) => bail!("window radius must be positive or 0 for automatic, got {r}"),
    };
    let target_rel_truncation = match file.sim.target_rel_truncation {
        None => DEFAULT_REL_TRUNCATION,
        Some(f) if f.is_finite() && f > 0.0 => f,
        Some(f) => bail!("target_rel_truncation must be positive, got {f}"),
    };
    let trials = ov.trials.or(file.sim.trials).unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        bail!("trials must be at least 1");
    }
    let sim = SimConfig {
        window_radius,
        trials,
        seed: ov.seed.or(file.sim.seed).unwrap_or(DEFAULT_SEED),
        target_rel_truncation,
    };

    let thresholds = validated_thresholds(
        ov.thresholds
            .clone()
            .or_else(|| file.sim.thresholds.clone())
            .unwrap_or_else(|| DEFAULT_THRESHOLDS.to_vec()),
    )?;

    let threshold_mode = match ov
        .threshold_mode
        .as_deref()
        .or(file.sweep.threshold_mode.as_deref())
    {
        None => ThresholdMode::ClosedForm,
        Some(token) => parse_threshold_mode(token)?,
    };

    let variable = match file.sweep.variable.as_deref() {
        None => SweepVariable::LambdaB,
        Some(token) => token.parse()?,
    };
    let grid = match &file.sweep.grid {
        Some(grid) => grid.clone(),
        // Default sweep: BS density over two decades of the BS/user density
        // ratio on each side of 1.
        None => log_grid(
            1e-2 * params.lambda_u(),
            1e2 * params.lambda_u(),
            DEFAULT_GRID_POINTS,
        ),
    };
    let schemes = match &file.sweep.schemes {
        Some(tokens) => tokens
            .iter()
            .map(|t| parse_scheme_kind(t))
            .collect::<Result<Vec<_>>>()?,
        None => vec![SchemeKind::Baseline, SchemeKind::FrB, SchemeKind::FrU],
    };
    let outputs = match &file.sweep.outputs {
        Some(tokens) => tokens
            .iter()
            .map(|t| t.parse())
            .collect::<Result<Vec<_>>>()?,
        None => OutputColumn::ALL.to_vec(),
    };
    let sweep = SweepSpec {
        variable,
        grid,
        fixed: params,
        schemes,
        outputs,
        m_max_frb: ov.m_max.or(file.sweep.m_max_frb).unwrap_or(DEFAULT_M_MAX_FRB),
        m_max_fru: ov.m_max.or(file.sweep.m_max_fru).unwrap_or(DEFAULT_M_MAX_FRU),
        threshold_mode,
    };
    sweep.validate()?;

    Ok(Resolved {
        params,
        scheme,
        sim,
        thresholds,
        threshold_mode,
        sweep,
    })
}
