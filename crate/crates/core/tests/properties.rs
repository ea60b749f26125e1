//! Randomized invariants of the closed forms: identities the mathematics
//! guarantees for every parameter choice, checked over generated inputs.

use proptest::prelude::*;
use ubirate_core::hypergeometric::{coverage_exact, coverage_pfaff, gauss_2f1, CoverageArgs};
use ubirate_core::model::{
    channel_occupancy, reliability, scheme_parameters, threshold_for_reliability, ubiquitous_rate,
    NetworkParams, Scheme, SchemeKind, ThresholdMode,
};
use ubirate_core::optimizer::{optimal_m_full_search, optimal_m_surrogate};

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn network() -> impl Strategy<Value = NetworkParams> {
    (
        log_uniform(1e-2, 1e2),
        log_uniform(1e-2, 1e2),
        2.05..8.0f64,
        0.9..0.9995f64,
    )
        .prop_map(|(lambda_b, lambda_u, alpha, eta)| {
            NetworkParams::new(lambda_b, lambda_u, alpha, 1e8, eta).unwrap()
        })
}

fn any_scheme() -> impl Strategy<Value = Scheme> {
    (0..3, 1..64u32).prop_map(|(kind, m)| match kind {
        0 => Scheme::baseline(),
        1 => Scheme::frb(m).unwrap(),
        _ => Scheme::fru(m).unwrap(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // 2F1(a, b; b; z) collapses to (1 - z)^{-a} for every b, which checks
    // both series routes against an elementary function.
    #[test]
    fn binomial_identity(
        a in -3.0..3.0f64,
        b in 0.5..4.0f64,
        z in -0.9..0.9f64,
    ) {
        let v = gauss_2f1(a, b, b, z).unwrap();
        let reference = (1.0 - z).powf(-a);
        prop_assert!((v - reference).abs() <= 1e-11 * reference.abs().max(1.0), "{v} vs {reference}");
    }

    #[test]
    fn series_at_zero_is_one(a in -5.0..5.0f64, b in -5.0..5.0f64, c in 0.3..5.0f64) {
        prop_assert_eq!(gauss_2f1(a, b, c, 0.0).unwrap(), 1.0);
    }

    // The coverage form of the series: 1/coverage = 2F1(1, -s; 1-s; -x),
    // reachable through the public entry point for moderate x.
    #[test]
    fn coverage_agrees_with_public_series(x in log_uniform(1e-4, 50.0), alpha in 2.05..8.0f64) {
        let s = 2.0 / alpha;
        let f = gauss_2f1(1.0, -s, 1.0 - s, -x).unwrap();
        let cov = coverage_exact(CoverageArgs::new(x, alpha).unwrap()).unwrap();
        prop_assert!((cov * f - 1.0).abs() < 1e-11, "x={x} alpha={alpha}: {} vs {}", cov, 1.0/f);
    }

    #[test]
    fn coverage_is_a_probability_and_decreases_in_x(
        x1 in log_uniform(1e-6, 1e6),
        x2 in log_uniform(1e-6, 1e6),
        alpha in 2.05..8.0f64,
    ) {
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let c_lo = coverage_exact(CoverageArgs::new(lo, alpha).unwrap()).unwrap();
        let c_hi = coverage_exact(CoverageArgs::new(hi, alpha).unwrap()).unwrap();
        prop_assert!(c_lo > 0.0 && c_lo <= 1.0);
        prop_assert!(c_hi > 0.0 && c_hi <= 1.0);
        // More interference never helps; allow one part in 1e12 of float slack.
        prop_assert!(c_hi <= c_lo * (1.0 + 1e-12), "{c_lo} -> {c_hi}");
    }

    #[test]
    fn bounds_sandwich_the_exact_value(
        params in network(),
        scheme in any_scheme(),
        t in log_uniform(1e-6, 1e6),
    ) {
        // The bounds replace the deficit by its algebraic envelope, so the
        // sandwich holds at every interferer ratio, not just full load.
        let r = reliability(&params, scheme, t).unwrap();
        let slack = 1.0 + 1e-12;
        prop_assert!(r.lower_lemma2 <= r.exact * slack, "{:?}", r);
        prop_assert!(r.exact <= r.upper_lemma2 * slack, "{:?}", r);
        prop_assert!(r.ultra_lemma3 <= r.exact * slack, "{:?}", r);
    }

    #[test]
    fn pfaff_route_agrees_with_exact(x in log_uniform(1e-4, 1e4), alpha in 2.05..8.0f64) {
        let args = CoverageArgs::new(x, alpha).unwrap();
        let a = coverage_exact(args).unwrap();
        let b = coverage_pfaff(args).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a, "x={x} alpha={alpha}: {a} vs {b}");
    }

    #[test]
    fn occupancy_is_monotone_and_proper(
        l1 in log_uniform(1e-3, 1e3),
        l2 in log_uniform(1e-3, 1e3),
        lambda_b in log_uniform(1e-2, 1e2),
    ) {
        let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        let p_lo = channel_occupancy(lo, lambda_b).unwrap();
        let p_hi = channel_occupancy(hi, lambda_b).unwrap();
        prop_assert!(p_lo > 0.0 && p_hi < 1.0);
        prop_assert!(p_lo <= p_hi);
        // Heavier load per BS when BSs thin out.
        let denser = channel_occupancy(lo, lambda_b * 2.0).unwrap();
        prop_assert!(denser <= p_lo);
    }

    #[test]
    fn reliability_decreases_in_threshold(
        params in network(),
        scheme in any_scheme(),
        t1 in log_uniform(1e-3, 1e3),
        t2 in log_uniform(1e-3, 1e3),
    ) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let r_lo = reliability(&params, scheme, lo).unwrap();
        let r_hi = reliability(&params, scheme, hi).unwrap();
        prop_assert!(r_hi.exact <= r_lo.exact * (1.0 + 1e-12));
    }

    #[test]
    fn more_channels_never_lower_reliability(
        params in network(),
        m1 in 1..256u32,
        m2 in 1..256u32,
        t in log_uniform(1e-2, 1e2),
    ) {
        let (lo, hi) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
        type Build = fn(u32) -> ubirate_core::Result<Scheme>;
        for build in [Scheme::frb as Build, Scheme::fru as Build] {
            let r_lo = reliability(&params, build(lo).unwrap(), t).unwrap();
            let r_hi = reliability(&params, build(hi).unwrap(), t).unwrap();
            prop_assert!(r_hi.exact >= r_lo.exact * (1.0 - 1e-12));
        }
    }

    #[test]
    fn single_channel_reuse_is_the_baseline(params in network(), t in log_uniform(1e-2, 1e2)) {
        let base = reliability(&params, Scheme::baseline(), t).unwrap();
        for scheme in [Scheme::frb(1).unwrap(), Scheme::fru(1).unwrap()] {
            let r = reliability(&params, scheme, t).unwrap();
            prop_assert_eq!(r.exact, base.exact);
            let d = scheme_parameters(&params, scheme);
            let db = scheme_parameters(&params, Scheme::baseline());
            prop_assert_eq!(d.interferer_density, db.interferer_density);
            prop_assert_eq!(d.max_alloc, db.max_alloc);
            prop_assert_eq!(d.alloc_fraction, db.alloc_fraction);
        }
    }

    // Everything downstream depends on densities only through their
    // ratio, so a joint rescale is invisible.
    #[test]
    fn rates_are_scale_invariant(params in network(), scheme in any_scheme(), kappa in log_uniform(1e-3, 1e3)) {
        let scaled = NetworkParams::new(
            params.lambda_b() * kappa,
            params.lambda_u() * kappa,
            params.alpha(),
            params.bandwidth_w(),
            params.eta(),
        ).unwrap();
        let r0 = ubiquitous_rate(&params, scheme);
        let r1 = ubiquitous_rate(&scaled, scheme);
        prop_assert!((r0 - r1).abs() <= 1e-9 * r0.abs(), "{r0} vs {r1}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn numeric_threshold_hits_the_target(params in network(), scheme in any_scheme()) {
        let t = threshold_for_reliability(&params, scheme, ThresholdMode::ExactNumeric).unwrap();
        let r = reliability(&params, scheme, t).unwrap();
        prop_assert!((r.exact - params.eta()).abs() < 1e-8, "eta={} got {}", params.eta(), r.exact);
    }

    // Densifying BSs at fixed user density never hurts the offered rate.
    #[test]
    fn densification_never_lowers_the_rate(
        params in network(),
        scheme in any_scheme(),
        factor in 1.0..100.0f64,
    ) {
        let denser = params.with_lambda_b(params.lambda_b() * factor).unwrap();
        let r0 = ubiquitous_rate(&params, scheme);
        let r1 = ubiquitous_rate(&denser, scheme);
        prop_assert!(r1 >= r0 * (1.0 - 1e-12), "{r0} -> {r1}");
    }

    #[test]
    fn full_search_is_consistent_and_dominates_surrogate(
        params in network(),
        kind in prop_oneof![Just(SchemeKind::FrB), Just(SchemeKind::FrU)],
        m_max in 1..256u32,
    ) {
        let full = optimal_m_full_search(&params, kind, m_max);
        prop_assert_eq!(full.objective_trace.len(), m_max as usize);
        let (best_m, best_v) = (full.m_star, full.rate_at_m_star);
        for &(m, v) in &full.objective_trace {
            prop_assert!(v <= best_v, "trace beats the reported optimum");
            // Ties break toward the smallest M.
            if v == best_v {
                prop_assert!(m >= best_m);
            }
        }
        prop_assert_eq!(full.hit_cap, best_m == m_max && m_max > 1);

        let surrogate = optimal_m_surrogate(&params, kind, m_max);
        prop_assert!(surrogate.rate_at_m_star <= best_v * (1.0 + 1e-12));
    }
}
