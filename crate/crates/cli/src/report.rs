//! Sweep tables, Monte Carlo validation reports, figure data, and the
//! CSV dialect they share.
//!
//! CSV dialect: comma separator, one header row, `.` decimal point,
//! scientific notation for columns carrying rate-like units (b/s, Hz),
//! plain shortest-round-trip notation everywhere else. Output is a pure
//! function of the resolved config, so identical configs and seeds give
//! byte-identical files.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use ubirate_core::model::{
    reliability, scheme_parameters, threshold_for_reliability, ubiquitous_rate, NetworkParams,
    Scheme, SchemeKind, ThresholdMode,
};
use ubirate_core::montecarlo::{estimate_coverage, Diagnostics, SimConfig};
use ubirate_core::optimizer::{optimal_m_full_search, optimal_m_surrogate, OptimizationResult};

/// Absolute tolerance for validation rows; the effective tolerance is
/// the larger of this and the row's 95% half-width, so well-sampled runs
/// are held to a fixed bar and short runs to their own noise level.
pub const VALIDATION_ABS_TOL: f64 = 0.005;

/// `n` geometrically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "need 0 < lo < hi and n >= 2");
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// Which network parameter a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    LambdaB,
    Eta,
    Alpha,
}

impl SweepVariable {
    pub fn token(self) -> &'static str {
        match self {
            SweepVariable::LambdaB => "lambda_b",
            SweepVariable::Eta => "eta",
            SweepVariable::Alpha => "alpha",
        }
    }

    /// The fixed parameter set with this variable replaced by `value`.
    pub fn apply(self, fixed: &NetworkParams, value: f64) -> Result<NetworkParams> {
        let updated = match self {
            SweepVariable::LambdaB => fixed.with_lambda_b(value),
            SweepVariable::Eta => fixed.with_eta(value),
            SweepVariable::Alpha => fixed.with_alpha(value),
        };
        updated.with_context(|| format!("sweep value {value} invalid for {}", self.token()))
    }
}

impl FromStr for SweepVariable {
    type Err = anyhow::Error;

    fn from_str(token: &str) -> Result<Self> {
        match token.to_ascii_lowercase().as_str() {
            "lambda_b" => Ok(SweepVariable::LambdaB),
            "eta" => Ok(SweepVariable::Eta),
            "alpha" => Ok(SweepVariable::Alpha),
            other => bail!("unknown sweep variable {other:?} (expected lambda_b, eta, or alpha)"),
        }
    }
}

/// One reported quantity per scheme column group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputColumn {
    MStar,
    Rate,
    InterfererRatio,
    MaxAlloc,
    AllocFraction,
    SpectralEff,
}

impl OutputColumn {
    pub const ALL: [OutputColumn; 6] = [
        OutputColumn::MStar,
        OutputColumn::Rate,
        OutputColumn::InterfererRatio,
        OutputColumn::MaxAlloc,
        OutputColumn::AllocFraction,
        OutputColumn::SpectralEff,
    ];

    pub fn token(self) -> &'static str {
        match self {
            OutputColumn::MStar => "m_star",
            OutputColumn::Rate => "rate",
            OutputColumn::InterfererRatio => "interferer_ratio",
            OutputColumn::MaxAlloc => "max_alloc",
            OutputColumn::AllocFraction => "alloc_fraction",
            OutputColumn::SpectralEff => "spectral_eff",
        }
    }
}

impl FromStr for OutputColumn {
    type Err = anyhow::Error;

    fn from_str(token: &str) -> Result<Self> {
        OutputColumn::ALL
            .into_iter()
            .find(|c| c.token() == token.to_ascii_lowercase())
            .with_context(|| {
                let valid: Vec<_> = OutputColumn::ALL.iter().map(|c| c.token()).collect();
                format!("unknown output column {token:?} (expected one of {valid:?})")
            })
    }
}

/// A parameter sweep: one table row per grid value, one column group per
/// scheme and search method.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Strictly increasing, nonempty.
    pub grid: Vec<f64>,
    /// Parameters held fixed except for the swept one.
    pub fixed: NetworkParams,
    pub schemes: Vec<SchemeKind>,
    pub outputs: Vec<OutputColumn>,
    pub m_max_frb: u32,
    pub m_max_fru: u32,
    /// How reported thresholds (the `spectral_eff` column) are inverted.
    pub threshold_mode: ThresholdMode,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        ensure!(!self.grid.is_empty(), "sweep grid must be nonempty");
        ensure!(
            self.grid.iter().all(|v| v.is_finite()),
            "sweep grid must be finite"
        );
        ensure!(
            self.grid.windows(2).all(|w| w[0] < w[1]),
            "sweep grid must be strictly increasing"
        );
        ensure!(!self.schemes.is_empty(), "sweep needs at least one scheme");
        ensure!(!self.outputs.is_empty(), "sweep needs at least one output column");
        ensure!(
            self.m_max_frb >= 1 && self.m_max_fru >= 1,
            "search caps must be at least 1"
        );
        Ok(())
    }

    fn m_max(&self, kind: SchemeKind) -> u32 {
        match kind {
            SchemeKind::Baseline => 1,
            SchemeKind::FrB => self.m_max_frb,
            SchemeKind::FrU => self.m_max_fru,
        }
    }
}

/// One CSV cell; the variant fixes the formatting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    /// Plain shortest-round-trip decimal.
    Num(f64),
    /// Scientific notation, for rate-like units.
    Sci(f64),
}

impl Cell {
    /// Numeric value regardless of formatting, for round-trip checks.
    pub fn value(self) -> f64 {
        match self {
            Cell::Int(v) => v as f64,
            Cell::Num(v) | Cell::Sci(v) => v,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Num(v) => write!(f, "{v}"),
            Cell::Sci(v) => write!(f, "{v:e}"),
        }
    }
}

/// A rectangular report with named columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.headers.len());
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())
            .with_context(|| format!("writing {}", path.display()))
    }

    /// Parses a file in this module's dialect back into headers and
    /// numeric rows. Every non-header cell must parse as `f64`.
    pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
        let mut lines = text.lines();
        let headers: Vec<String> = lines
            .next()
            .context("empty CSV")?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<f64> = line
                .split(',')
                .map(|cell| {
                    cell.parse()
                        .with_context(|| format!("row {}, cell {cell:?}", i + 1))
                })
                .collect::<Result<_>>()?;
            ensure!(
                row.len() == headers.len(),
                "row {} has {} cells, header has {}",
                i + 1,
                row.len(),
                headers.len()
            );
            rows.push(row);
        }
        Ok((headers, rows))
    }
}

/// Column groups of a sweep: the baseline has nothing to search, reuse
/// kinds get a full-search and a surrogate group.
fn groups(kind: SchemeKind) -> Vec<(String, SearchKind)> {
    match kind {
        SchemeKind::Baseline => vec![("baseline".into(), SearchKind::Full)],
        _ => vec![
            (format!("{}_full", kind.token()), SearchKind::Full),
            (format!("{}_surr", kind.token()), SearchKind::Surrogate),
        ],
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SearchKind {
    Full,
    Surrogate,
}

fn optimize(
    params: &NetworkParams,
    kind: SchemeKind,
    search: SearchKind,
    m_max: u32,
) -> OptimizationResult {
    match search {
        SearchKind::Full => optimal_m_full_search(params, kind, m_max),
        SearchKind::Surrogate => optimal_m_surrogate(params, kind, m_max),
    }
}

/// Runs the sweep: for every grid value and scheme, both searches, the
/// resulting rate, and the scheme decomposition at the found optimum.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let mut headers = vec![spec.variable.token().to_string()];
    for &kind in &spec.schemes {
        for (prefix, _) in groups(kind) {
            for col in &spec.outputs {
                headers.push(format!("{prefix}_{}", col.token()));
            }
        }
    }

    let mut rows = Vec::with_capacity(spec.grid.len());
    for &value in &spec.grid {
        let params = spec.variable.apply(&spec.fixed, value)?;
        let mut row = vec![Cell::Num(value)];
        for &kind in &spec.schemes {
            for (_, search) in groups(kind) {
                let opt = optimize(&params, kind, search, spec.m_max(kind));
                let scheme = Scheme::new(kind, opt.m_star)?;
                let derived = scheme_parameters(&params, scheme);
                for col in &spec.outputs {
                    row.push(match col {
                        OutputColumn::MStar => Cell::Int(i64::from(opt.m_star)),
                        OutputColumn::Rate => Cell::Sci(opt.rate_at_m_star),
                        OutputColumn::InterfererRatio => {
                            Cell::Num(derived.interferer_density / params.lambda_b())
                        }
                        OutputColumn::MaxAlloc => Cell::Sci(derived.max_alloc),
                        OutputColumn::AllocFraction => Cell::Num(derived.alloc_fraction),
                        OutputColumn::SpectralEff => {
                            let t = threshold_for_reliability(
                                &params,
                                scheme,
                                spec.threshold_mode,
                            )?;
                            Cell::Num((1.0 + t).log2())
                        }
                    });
                }
            }
        }
        rows.push(row);
    }
    Ok(Table { headers, rows })
}

/// Density at which each scheme's full-search rate first reaches
/// `target` along an ascending `lambda_b` sweep; one report line per
/// scheme.
pub fn target_rate_report(spec: &SweepSpec, target: f64) -> Result<Vec<String>> {
    ensure!(
        spec.variable == SweepVariable::LambdaB,
        "--target-rate needs a lambda_b sweep, got {}",
        spec.variable.token()
    );
    ensure!(
        target.is_finite() && target > 0.0,
        "target rate must be positive, got {target}"
    );
    spec.validate()?;
    let mut lines = Vec::new();
    for &kind in &spec.schemes {
        let mut crossing = None;
        for &value in &spec.grid {
            let params = spec.variable.apply(&spec.fixed, value)?;
            let opt = optimal_m_full_search(&params, kind, spec.m_max(kind));
            if opt.rate_at_m_star >= target {
                crossing = Some((value, opt));
                break;
            }
        }
        lines.push(match crossing {
            Some((value, opt)) => format!(
                "{}: first reaches {target:e} b/s at lambda_b = {value} (m_star = {}, rate = {:e})",
                kind.token(),
                opt.m_star,
                opt.rate_at_m_star
            ),
            None => format!(
                "{}: does not reach {target:e} b/s within the grid",
                kind.token()
            ),
        });
    }
    Ok(lines)
}

/// One threshold's empirical-vs-analytic comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationRow {
    pub threshold: f64,
    pub empirical: f64,
    pub half_width_95: f64,
    pub exact: f64,
    pub lemma2_lower: f64,
    pub lemma2_upper: f64,
    pub lemma3: f64,
    pub pass: bool,
}

/// Simulator-vs-closed-form report for one scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub window_sufficient: bool,
    pub truncation_fraction: f64,
    pub diagnostics: Diagnostics,
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    /// Every row within tolerance and the window large enough to trust
    /// them.
    pub fn passed(&self) -> bool {
        self.window_sufficient && self.rows.iter().all(|r| r.pass)
    }

    pub fn to_table(&self) -> Table {
        Table {
            headers: [
                "threshold",
                "empirical",
                "half_width_95",
                "exact",
                "lemma2_lower",
                "lemma2_upper",
                "lemma3",
                "pass",
            ]
            .map(str::to_string)
            .to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Num(r.threshold),
                        Cell::Num(r.empirical),
                        Cell::Num(r.half_width_95),
                        Cell::Num(r.exact),
                        Cell::Num(r.lemma2_lower),
                        Cell::Num(r.lemma2_upper),
                        Cell::Num(r.lemma3),
                        Cell::Int(i64::from(r.pass)),
                    ]
                })
                .collect(),
        }
    }
}

/// Simulates the scheme and compares empirical coverage against the
/// closed forms at every threshold. A row passes when the empirical mean
/// is within `max(VALIDATION_ABS_TOL, half_width)` of the exact value.
pub fn run_validation(
    params: &NetworkParams,
    scheme: Scheme,
    sim: &SimConfig,
    thresholds: &[f64],
) -> Result<ValidationReport> {
    let estimate = estimate_coverage(params, scheme, sim, thresholds);
    let mut rows = Vec::with_capacity(thresholds.len());
    for (t, est) in estimate.per_threshold {
        let analytic = reliability(params, scheme, t)?;
        let tol = VALIDATION_ABS_TOL.max(est.half_width_95);
        rows.push(ValidationRow {
            threshold: t,
            empirical: est.mean,
            half_width_95: est.half_width_95,
            exact: analytic.exact,
            lemma2_lower: analytic.lower_lemma2,
            lemma2_upper: analytic.upper_lemma2,
            lemma3: analytic.ultra_lemma3,
            pass: (est.mean - analytic.exact).abs() <= tol,
        });
    }
    Ok(ValidationReport {
        window_sufficient: sim.window_sufficient(params),
        truncation_fraction: sim.truncation_fraction(params),
        diagnostics: estimate.diagnostics,
        rows,
    })
}

/// Prebaked figure datasets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureKind {
    /// Reliability and its bounds at full load over a log threshold grid.
    Fig2Bounds,
    /// Optimized rate of each scheme over the sweep grid.
    Fig3Rates,
    /// Optimal channel count of each scheme over the sweep grid.
    Fig4MStar,
    /// Full decomposition (every output column) over the sweep grid.
    Decomposition,
}

impl FromStr for FigureKind {
    type Err = anyhow::Error;

    fn from_str(token: &str) -> Result<Self> {
        match token.to_ascii_lowercase().as_str() {
            "fig2_bounds" => Ok(FigureKind::Fig2Bounds),
            "fig3_rates" => Ok(FigureKind::Fig3Rates),
            "fig4_mstar" => Ok(FigureKind::Fig4MStar),
            "decomposition" => Ok(FigureKind::Decomposition),
            other => bail!(
                "unknown figure kind {other:?} \
                 (expected fig2_bounds, fig3_rates, fig4_mstar, or decomposition)"
            ),
        }
    }
}

/// Threshold grid for [`FigureKind::Fig2Bounds`].
const FIG2_T_RANGE: (f64, f64) = (1e-3, 1e3);
const FIG2_T_POINTS: usize = 121;

/// Builds the requested figure's data table. The sweep-based kinds use
/// `spec` as-is except for the column selection; `fig2_bounds` only
/// takes the path loss exponent from it, evaluating at full load
/// (interferer density equal to BS density) like the reference curves.
pub fn figure_table(kind: FigureKind, spec: &SweepSpec) -> Result<Table> {
    match kind {
        FigureKind::Fig2Bounds => {
            // A user density 1e9 times the BS density puts the channel
            // occupancy at 1.0 to the last bit: exactly full load.
            let full_load = NetworkParams::new(
                1.0,
                1e9,
                spec.fixed.alpha(),
                spec.fixed.bandwidth_w(),
                spec.fixed.eta(),
            )?;
            let headers = ["t", "exact", "lemma2_lower", "lemma2_upper", "lemma3"]
                .map(str::to_string)
                .to_vec();
            let mut rows = Vec::with_capacity(FIG2_T_POINTS);
            for t in log_grid(FIG2_T_RANGE.0, FIG2_T_RANGE.1, FIG2_T_POINTS) {
                let r = reliability(&full_load, Scheme::baseline(), t)?;
                rows.push(vec![
                    Cell::Num(t),
                    Cell::Num(r.exact),
                    Cell::Num(r.lower_lemma2),
                    Cell::Num(r.upper_lemma2),
                    Cell::Num(r.ultra_lemma3),
                ]);
            }
            Ok(Table { headers, rows })
        }
        FigureKind::Fig3Rates => run_sweep(&with_outputs(spec, vec![OutputColumn::Rate])),
        FigureKind::Fig4MStar => run_sweep(&with_outputs(spec, vec![OutputColumn::MStar])),
        FigureKind::Decomposition => run_sweep(&with_outputs(spec, OutputColumn::ALL.to_vec())),
    }
}

fn with_outputs(spec: &SweepSpec, outputs: Vec<OutputColumn>) -> SweepSpec {
    SweepSpec {
        outputs,
        ..spec.clone()
    }
}

/// Baseline ubiquitous rate, for context lines next to optimizer output.
pub fn baseline_rate(params: &NetworkParams) -> f64 {
    ubiquitous_rate(params, Scheme::baseline())
}
