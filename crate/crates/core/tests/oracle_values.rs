//! Frozen reference values for the closed forms, computed independently
//! with 50-digit arithmetic and pasted here as constants. These pin the
//! implementation to the mathematics, not to itself: any regression in
//! the series kernels, routing, or scheme algebra shows up as a drift
//! from these numbers.

use ubirate_core::hypergeometric::{c_alpha, coverage_exact, coverage_pfaff, gauss_2f1, CoverageArgs};
use ubirate_core::model::{
    c_eta, channel_occupancy, rate_at_threshold, reliability, scheme_parameters,
    taylor_threshold, threshold_for_reliability, ubiquitous_rate, NetworkParams, Scheme,
    ThresholdMode,
};
use ubirate_core::optimizer::{optimal_m_full_search, SearchMethod};

fn assert_rel(value: f64, reference: f64, tol: f64, what: &str) {
    let rel = (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE);
    assert!(
        rel <= tol,
        "{what}: value {value:e} vs reference {reference:e} (rel err {rel:e} > {tol:e})"
    );
}

/// `(a, b, c, z, reference)`
const GAUSS_TABLE: &[(f64, f64, f64, f64, f64)] = &[
    (1.0, -0.5, 0.5, -1.0, 1.785_398_163_397_448_3),
    (1.0, -0.5, 0.5, -0.999, 1.784_755_366_112_715_3),
    (1.0, -0.5, 0.5, -0.5, 1.435_209_875_683_551_6),
    (1.0, -0.5, 0.5, -0.25, 1.231_823_804_500_403_1),
    (1.0, -0.5, 0.5, 0.5, 0.376_774_759_859_769_49),
    (0.5, 1.5, 2.25, 0.3, 1.121_926_327_597_399_7),
    (0.5, 1.5, 2.25, -0.7, 0.830_998_577_068_132_97),
    (1.0, 1.0, 2.0, 0.5, 1.386_294_361_119_890_6),
    (1.0, 1.0, 2.0, -0.9, 0.713_170_984_635_994_19),
    (2.0, 3.0, 4.5, 0.9, 12.862_862_523_589_223),
    (1.0, 2.0, 3.5, 0.95, 3.113_885_856_833_259_8),
    (2.0, 3.0, 4.5, -30.0, 0.003_683_387_657_431_938),
    (-1.5, 2.0, 3.5, -2.5, 3.867_946_264_399_534_3),
    (-2.0, 5.0, 1.5, 0.8, 0.786_666_666_666_666_94),
    (0.25, 0.75, 1.25, -50.0, 0.466_565_987_325_213_52),
    (1.0, -0.25, 0.75, -12.0, 2.083_221_144_822_144_3),
];

#[test]
fn gauss_2f1_matches_reference_table() {
    // The stopping rule leaves a geometric tail of about term/(1 - |z|),
    // so accuracy degrades toward |z| = 1; 1e-12 covers z = 0.95.
    for &(a, b, c, z, reference) in GAUSS_TABLE {
        let v = gauss_2f1(a, b, c, z).unwrap();
        assert_rel(v, reference, 1e-12, &format!("gauss_2f1({a},{b},{c},{z})"));
    }
}

/// `(x, alpha, reference)` spanning both evaluation routes and the
/// extremes of the supported domain.
const COVERAGE_TABLE: &[(f64, f64, f64)] = &[
    (1e-6, 4.0, 0.999_999_000_001_333_33),
    (1e-3, 3.0, 0.998_004_489_737_824_53),
    (0.1, 2.5, 0.717_528_053_147_836_83),
    (0.25, 4.0, 0.811_804_412_568_220_34),
    (0.4, 6.0, 0.851_626_216_417_286_8),
    (0.499, 4.0, 0.697_135_595_841_654_03),
    (0.5, 4.0, 0.696_762_206_658_957_86),
    (0.501, 3.0, 0.525_405_830_039_061_38),
    (0.7, 8.0, 0.844_495_479_896_946_24),
    (1.0, 4.0, 0.560_099_153_511_557_38),
    (1.0, 2.1, 0.049_079_017_985_553_863),
    (3.0, 3.5, 0.281_616_945_226_809_6),
    (10.0, 4.0, 0.200_049_610_280_541_48),
    (10.0, 2.5, 0.037_008_948_486_606_431),
    (100.0, 6.0, 0.178_091_438_313_577_04),
    (1e4, 4.0, 0.006_366_196_372_808_036),
    (1e4, 8.0, 0.090_031_469_511_114_358),
    (1e6, 4.0, 6.366_197_722_324_865_1e-4),
    (1e6, 2.5, 3.706_626_493_736_235_5e-6),
];

#[test]
fn coverage_exact_matches_reference_table() {
    for &(x, alpha, reference) in COVERAGE_TABLE {
        let v = coverage_exact(CoverageArgs::new(x, alpha).unwrap()).unwrap();
        assert_rel(v, reference, 1e-12, &format!("coverage_exact({x},{alpha})"));
    }
}

#[test]
fn coverage_pfaff_matches_reference_table() {
    for &(x, alpha, reference) in COVERAGE_TABLE {
        let v = coverage_pfaff(CoverageArgs::new(x, alpha).unwrap()).unwrap();
        assert_rel(v, reference, 1e-9, &format!("coverage_pfaff({x},{alpha})"));
    }
}

#[test]
fn c_alpha_matches_reference_table() {
    for &(alpha, reference) in &[
        (2.5, 4.275_837_328_462_380_5),
        (3.0, 2.418_399_152_312_290_5),
        (3.5, 1.841_362_607_040_126_7),
        (5.0, 1.321_306_399_677_649_6),
        (6.0, 1.209_199_576_156_145_2),
        (8.0, 1.110_720_734_539_591_6),
    ] {
        assert_rel(c_alpha(alpha), reference, 1e-14, &format!("c_alpha({alpha})"));
    }
}

#[test]
fn occupancy_matches_reference_table() {
    for &(load, lambda_b, reference) in &[
        (0.25, 1.0, 0.214_531_599_179_381_34),
        (1.0, 1.0, 0.585_051_349_019_133_71),
        (4.0, 1.0, 0.930_573_745_921_498_42),
        (50.0, 1.0, 0.999_928_385_672_475_34),
        (0.5, 2.0, 0.214_531_599_179_381_34),
    ] {
        let v = channel_occupancy(load, lambda_b).unwrap();
        assert_rel(v, reference, 1e-14, &format!("occupancy({load},{lambda_b})"));
    }
}

fn default_network() -> NetworkParams {
    NetworkParams::new(1.0, 50.0, 4.0, 100e6, 0.99).unwrap()
}

#[test]
fn reliability_matches_reference_values() {
    let p = default_network();
    let r = reliability(&p, Scheme::baseline(), 1.0).unwrap();
    assert_rel(r.exact, 0.560_116_798_984_946_87, 1e-12, "baseline exact");
    assert_rel(r.upper_lemma2, 0.707_121_613_310_517, 1e-13, "upper");
    assert_rel(r.lower_lemma2, 0.450_175_884_453_466_03, 1e-13, "lower");
    assert_rel(r.ultra_lemma3, 0.500_017_904_222_980_61, 1e-13, "ultra");

    let frb = reliability(&p, Scheme::frb(3).unwrap(), 2.5).unwrap();
    assert_rel(frb.exact, 0.653_329_816_821_660_71, 1e-12, "frb exact");

    let fru = reliability(&p, Scheme::fru(3).unwrap(), 2.5).unwrap();
    assert_rel(fru.exact, 0.386_322_865_086_344_17, 1e-12, "fru exact");
    let fru_density = scheme_parameters(&p, Scheme::fru(3).unwrap()).interferer_density;
    assert_rel(fru_density, 0.997_822_196_279_234_89, 1e-14, "fru density");
}

#[test]
fn thresholds_match_reference_values() {
    let p = default_network();
    let taylor = taylor_threshold(&p, Scheme::baseline());
    assert_rel(taylor, 0.010_000_716_194_565_039, 1e-13, "taylor threshold");
    assert_rel(c_eta(4.0, 0.99), 0.01, 1e-13, "c_eta");

    let closed =
        threshold_for_reliability(&p, Scheme::baseline(), ThresholdMode::ClosedForm).unwrap();
    assert_rel(closed, 0.010_101_733_529_863_675, 1e-13, "closed-form threshold");

    let exact =
        threshold_for_reliability(&p, Scheme::baseline(), ThresholdMode::ExactNumeric).unwrap();
    assert_rel(exact, 0.010_135_771_388_987_547, 1e-9, "numeric threshold");
}

#[test]
fn rates_match_reference_values() {
    let p = default_network();
    let d = scheme_parameters(&p, Scheme::baseline());
    assert_rel(d.alloc_fraction, 0.019_998_567_713_449_507, 1e-14, "alloc");

    let t = taylor_threshold(&p, Scheme::baseline());
    let rate = rate_at_threshold(&p, Scheme::baseline(), t);
    assert_rel(rate, 28_710.575_757_874_633, 1e-12, "rate at taylor threshold");
    assert_rel(
        ubiquitous_rate(&p, Scheme::baseline()),
        28_423.470_000_295_887,
        1e-12,
        "baseline ubiquitous rate",
    );
    assert_rel(
        ubiquitous_rate(&p, Scheme::fru(4).unwrap()),
        28_422.786_699_084_701,
        1e-12,
        "fru(4) ubiquitous rate",
    );
}

#[test]
fn full_search_matches_reference_optimum() {
    // Even in the sparse regime where reuse looks most attractive, the
    // exact closed-form rate declines with every band split (linear
    // bandwidth cost, logarithmic threshold gain), so the brute-force
    // reference optimum is M = 1 with the baseline rate.
    let p = NetworkParams::new(0.1, 10.0, 4.0, 100e6, 0.999).unwrap();
    let frb = optimal_m_full_search(&p, ubirate_core::model::SchemeKind::FrB, 512);
    assert_eq!(frb.m_star, 1);
    assert!(!frb.hit_cap);
    assert_eq!(frb.method, SearchMethod::FullSearch);
    assert_rel(frb.rate_at_m_star, 1_440.532_194_614_798_2, 1e-11, "frb optimum rate");

    let fru = optimal_m_full_search(&p, ubirate_core::model::SchemeKind::FrU, 4096);
    assert_eq!(fru.m_star, 1);
    assert!(!fru.hit_cap);
    assert_rel(fru.rate_at_m_star, 1_440.532_194_614_798_2, 1e-11, "fru optimum rate");

    // Denser network, user-side scheme: same conclusion, bigger rate.
    let p = NetworkParams::new(1.0, 10.0, 4.0, 100e6, 0.999).unwrap();
    let fru = optimal_m_full_search(&p, ubirate_core::model::SchemeKind::FrU, 4096);
    assert_eq!(fru.m_star, 1);
    assert!(!fru.hit_cap);
    assert_rel(fru.rate_at_m_star, 14_405.257_570_119_194, 1e-11, "fru dense rate");
}

#[test]
fn small_x_slope_matches_reference() {
    // (1 - coverage)/x at x = 1e-8; the limit is 2/(alpha - 2).
    for &(alpha, reference) in &[
        (3.0, 1.999_999_955_000_001),
        (4.0, 0.999_999_986_666_666_85),
        (6.0, 0.499_999_995_500_000_04),
    ] {
        let cov = coverage_exact(CoverageArgs::new(1e-8, alpha).unwrap()).unwrap();
        assert_rel((1.0 - cov) / 1e-8, reference, 1e-6, &format!("slope at alpha={alpha}"));
    }
}
