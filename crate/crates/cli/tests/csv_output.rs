//! CSV dialect, table layout, and figure-data invariants.

use approx::assert_relative_eq;
use ubirate_cli::report::{
    figure_table, log_grid, run_sweep, run_validation, target_rate_report, FigureKind,
    OutputColumn, SweepSpec, SweepVariable, Table,
};
use ubirate_core::model::{NetworkParams, Scheme, SchemeKind, ThresholdMode};
use ubirate_core::montecarlo::SimConfig;

fn params() -> NetworkParams {
    NetworkParams::new(1.0, 10.0, 4.0, 100e6, 0.99).unwrap()
}

fn spec(grid: Vec<f64>, schemes: Vec<SchemeKind>) -> SweepSpec {
    SweepSpec {
        variable: SweepVariable::LambdaB,
        grid,
        fixed: params(),
        schemes,
        outputs: OutputColumn::ALL.to_vec(),
        m_max_frb: 64,
        m_max_fru: 64,
        threshold_mode: ThresholdMode::ClosedForm,
    }
}

#[test]
fn round_trip_reproduces_the_table() {
    let table = run_sweep(&spec(
        vec![0.5, 2.0],
        vec![SchemeKind::Baseline, SchemeKind::FrB],
    ))
    .unwrap();
    let (headers, rows) = Table::parse_csv(&table.to_csv()).unwrap();
    assert_eq!(headers, table.headers);
    assert_eq!(rows.len(), table.rows.len());
    for (parsed, original) in rows.iter().zip(&table.rows) {
        for (p, o) in parsed.iter().zip(original) {
            // Shortest-round-trip formatting: bit-exact after reparsing.
            assert_eq!(*p, o.value());
        }
    }
}

#[test]
fn header_layout_follows_schemes_then_outputs() {
    let table = run_sweep(&spec(vec![1.0], vec![SchemeKind::Baseline, SchemeKind::FrB])).unwrap();
    let expected: Vec<&str> = [
        "lambda_b",
        "baseline_m_star",
        "baseline_rate",
        "baseline_interferer_ratio",
        "baseline_max_alloc",
        "baseline_alloc_fraction",
        "baseline_spectral_eff",
        "frb_full_m_star",
        "frb_full_rate",
        "frb_full_interferer_ratio",
        "frb_full_max_alloc",
        "frb_full_alloc_fraction",
        "frb_full_spectral_eff",
        "frb_surr_m_star",
        "frb_surr_rate",
        "frb_surr_interferer_ratio",
        "frb_surr_max_alloc",
        "frb_surr_alloc_fraction",
        "frb_surr_spectral_eff",
    ]
    .to_vec();
    assert_eq!(table.headers, expected);
}

#[test]
fn rate_columns_use_scientific_notation() {
    let table = run_sweep(&spec(vec![1.0], vec![SchemeKind::Baseline])).unwrap();
    let csv = table.to_csv();
    let headers: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let cells: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let rate = headers.iter().position(|h| *h == "baseline_rate").unwrap();
    let alloc = headers
        .iter()
        .position(|h| *h == "baseline_max_alloc")
        .unwrap();
    assert!(cells[rate].contains('e'), "{}", cells[rate]);
    assert!(cells[alloc].contains('e'), "{}", cells[alloc]);
    // Probability-like columns stay plain.
    let frac = headers
        .iter()
        .position(|h| *h == "baseline_alloc_fraction")
        .unwrap();
    assert!(!cells[frac].contains('e'), "{}", cells[frac]);
}

#[test]
fn single_point_baseline_sweep_has_one_row_with_m_star_one() {
    let table = run_sweep(&spec(vec![2.5], vec![SchemeKind::Baseline])).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.rows[0][0].value(), 2.5);
    let m_star = table
        .headers
        .iter()
        .position(|h| h == "baseline_m_star")
        .unwrap();
    assert_eq!(table.rows[0][m_star].value(), 1.0);
}

#[test]
fn fig2_lemma3_column_matches_the_reciprocal_form() {
    // At alpha = 4 and full load the algebraic bound reduces to 1/(1+t).
    let table = figure_table(FigureKind::Fig2Bounds, &spec(vec![1.0], vec![])).unwrap();
    assert_eq!(
        table.headers,
        vec!["t", "exact", "lemma2_lower", "lemma2_upper", "lemma3"]
    );
    assert!(table.rows.len() > 100);
    for row in &table.rows {
        let (t, exact, lower, upper, lemma3) = (
            row[0].value(),
            row[1].value(),
            row[2].value(),
            row[3].value(),
            row[4].value(),
        );
        assert_relative_eq!(lemma3, 1.0 / (1.0 + t), max_relative = 1e-12);
        assert!(lower <= exact && exact <= upper);
        assert!(lemma3 <= exact * (1.0 + 1e-15));
    }
    let first = &table.rows[0];
    let last = table.rows.last().unwrap();
    assert_eq!(first[0].value(), 1e-3);
    assert_eq!(last[0].value(), 1e3);
}

#[test]
fn fig3_with_one_grid_point_is_a_single_row() {
    let table = figure_table(
        FigureKind::Fig3Rates,
        &spec(vec![1.0], vec![SchemeKind::Baseline, SchemeKind::FrU]),
    )
    .unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(
        table.headers,
        vec!["lambda_b", "baseline_rate", "fru_full_rate", "fru_surr_rate"]
    );
}

#[test]
fn fig4_m_star_columns_are_one_at_the_dense_end() {
    let table = figure_table(
        FigureKind::Fig4MStar,
        &spec(
            log_grid(0.1, 1000.0, 9),
            vec![SchemeKind::FrB, SchemeKind::FrU],
        ),
    )
    .unwrap();
    let last = table.rows.last().unwrap();
    for (h, cell) in table.headers.iter().zip(last).skip(1) {
        assert_eq!(cell.value(), 1.0, "{h} at the dense end");
    }
}

#[test]
fn validation_table_layout_and_determinism() {
    let p = params();
    let sim = SimConfig {
        window_radius: 16.0,
        trials: 300,
        seed: 5,
        target_rel_truncation: 1e-3,
    };
    let report = run_validation(&p, Scheme::baseline(), &sim, &[0.1, 1.0, 10.0]).unwrap();
    let table = report.to_table();
    assert_eq!(table.headers.len(), 8);
    assert_eq!(table.rows.len(), 3);
    let again = run_validation(&p, Scheme::baseline(), &sim, &[0.1, 1.0, 10.0]).unwrap();
    assert_eq!(table.to_csv(), again.to_table().to_csv());
    // 300 trials: the interval, not the absolute floor, gates each row.
    assert!(report.rows.iter().all(|r| r.half_width_95 > 0.005));
}

#[test]
fn target_rate_report_finds_the_first_crossing() {
    let spec = spec(vec![0.1, 1.0, 10.0], vec![SchemeKind::FrB]);
    // Rates grow with density, so a tiny target crosses immediately.
    let lines = target_rate_report(&spec, 1.0).unwrap();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].contains("at lambda_b = 0.1"), "{}", lines[0]);
    let lines = target_rate_report(&spec, 1e30).unwrap();
    assert!(lines[0].contains("does not reach"), "{}", lines[0]);

    let mut eta_spec = spec.clone();
    eta_spec.variable = SweepVariable::Eta;
    eta_spec.grid = vec![0.9, 0.99];
    assert!(target_rate_report(&eta_spec, 1.0).is_err());
}

#[test]
fn log_grid_hits_both_endpoints_exactly() {
    let grid = log_grid(1e-3, 1e3, 7);
    assert_eq!(grid[0], 1e-3);
    assert_eq!(grid[6], 1e3);
    assert!(grid.windows(2).all(|w| w[0] < w[1]));
}
