//! `ubirate`: reliability and ubiquitous-rate analysis of frequency
//! reuse in Poisson cellular downlinks.
//!
//! Subcommands: `sweep` (parameter sweeps with optimized channel
//! counts), `validate` (Monte Carlo vs closed form), `figure` (prebaked
//! figure datasets), `optimize` (channel-count search at one parameter
//! point). CSV goes to `--out` or stdout; human-readable summaries go to
//! stderr. Exit codes: 0 success, 1 validation failure, 2 usage or
//! config error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use ubirate_cli::config::{self, Overrides, Resolved};
use ubirate_cli::report::{self, baseline_rate, Table, ValidationReport, VALIDATION_ABS_TOL};
use ubirate_core::model::SchemeKind;
use ubirate_core::optimizer::{
    asymptotic_m_regime, optimal_m_full_search, optimal_m_surrogate, OptimizationResult,
};

#[derive(Parser)]
#[command(
    name = "ubirate",
    version,
    about = "Reliability and ubiquitous-rate analysis of frequency reuse \
             in Poisson cellular downlinks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Args shared by every subcommand.
#[derive(clap::Args)]
struct Common {
    /// Config file (TOML); flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

impl Common {
    fn resolve(&self) -> Result<Resolved> {
        let file = match &self.config {
            Some(path) => config::load_file(path)?,
            None => Default::default(),
        };
        config::resolve(&file, &self.overrides)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep a parameter and report optimized channel counts and rates
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report the first sweep density whose rate reaches this target (b/s)
        #[arg(long)]
        target_rate: Option<f64>,
    },
    /// Simulate one scheme and compare against the closed forms
    Validate {
        #[command(flatten)]
        common: Common,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a prebaked figure dataset
    Figure {
        #[command(flatten)]
        common: Common,
        /// fig2_bounds, fig3_rates, fig4_mstar, or decomposition
        #[arg(long)]
        kind: String,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search the channel count at one parameter point
    Optimize {
        #[command(flatten)]
        common: Common,
    },
}

fn emit(table: &Table, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            table.write_csv(path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", table.to_csv()),
    }
    Ok(())
}

fn optimum_line(kind: SchemeKind, method: &str, opt: &OptimizationResult) -> String {
    format!(
        "kind={} method={} m_star={} rate={:e} hit_cap={}",
        kind.token(),
        method,
        opt.m_star,
        opt.rate_at_m_star,
        opt.hit_cap
    )
}

fn validation_summary(report: &ValidationReport) {
    eprintln!(
        "window: truncation fraction {:.3e} ({})",
        report.truncation_fraction,
        if report.window_sufficient {
            "sufficient"
        } else {
            "INSUFFICIENT, results untrusted"
        }
    );
    let d = report.diagnostics;
    if d.zero_bs_redraws > 0 || d.infinite_sir > 0 {
        eprintln!(
            "diagnostics: {} empty-window redraws, {} infinite-SIR trials",
            d.zero_bs_redraws, d.infinite_sir
        );
    }
    for row in &report.rows {
        eprintln!(
            "t={:>9}: empirical {:.4} +- {:.4}, exact {:.4}, tol {:.4}: {}",
            row.threshold,
            row.empirical,
            row.half_width_95,
            row.exact,
            VALIDATION_ABS_TOL.max(row.half_width_95),
            if row.pass { "pass" } else { "FAIL" }
        );
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Sweep {
            common,
            out,
            target_rate,
        } => {
            let resolved = common.resolve()?;
            let table = report::run_sweep(&resolved.sweep)?;
            emit(&table, out.as_ref())?;
            if let Some(target) = target_rate {
                for line in report::target_rate_report(&resolved.sweep, target)? {
                    eprintln!("target-rate: {line}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Validate { common, out } => {
            let resolved = common.resolve()?;
            let report = report::run_validation(
                &resolved.params,
                resolved.scheme,
                &resolved.sim,
                &resolved.thresholds,
            )?;
            emit(&report.to_table(), out.as_ref())?;
            validation_summary(&report);
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Cmd::Figure { common, kind, out } => {
            let resolved = common.resolve()?;
            let table = report::figure_table(kind.parse()?, &resolved.sweep)?;
            emit(&table, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Optimize { common } => {
            let resolved = common.resolve()?;
            let params = &resolved.params;
            println!("kind=baseline rate={:e}", baseline_rate(params));
            let kinds: &[SchemeKind] = match resolved.scheme.kind() {
                SchemeKind::Baseline => &[SchemeKind::FrB, SchemeKind::FrU],
                SchemeKind::FrB => &[SchemeKind::FrB],
                SchemeKind::FrU => &[SchemeKind::FrU],
            };
            for &kind in kinds {
                let m_max = match kind {
                    SchemeKind::FrB => resolved.sweep.m_max_frb,
                    _ => resolved.sweep.m_max_fru,
                };
                let full = optimal_m_full_search(params, kind, m_max);
                println!("{}", optimum_line(kind, "full", &full));
                let surr = optimal_m_surrogate(params, kind, m_max);
                println!("{}", optimum_line(kind, "surrogate", &surr));
            }
            eprintln!("regime: {:?}", asymptotic_m_regime(params));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
