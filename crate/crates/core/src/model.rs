//! Closed-form reliability and rate model of the three sharing schemes.
//!
//! Per scheme, three derived quantities drive everything
//! ([`scheme_parameters`]):
//!
//! | scheme   | interferer density      | max alloc | alloc fraction            |
//! |----------|-------------------------|-----------|---------------------------|
//! | baseline | `p_c(l_u) l_b`          | `W`       | `p_c(l_u) l_b / l_u`      |
//! | frb(M)   | `p_c(l_u) l_b / M`      | `W / M`   | `p_c(l_u) l_b / l_u`      |
//! | fru(M)   | `p_c(l_u / M) l_b`      | `W / M`   | `M p_c(l_u/M) l_b / l_u`  |
//!
//! where `p_c` is [`channel_occupancy`], the probability a BS has at least
//! one user on a given channel. The alloc fraction is the mean share
//! `E[1/N]` of the per-channel band a user keeps after TDMA sharing, and
//! is clamped to 1 where the formula exceeds it (possible when
//! `lambda_b >> lambda_u`; a share cannot exceed the whole).
//!
//! Reliability at SIR threshold `t` follows from the thinning structure of
//! the interference: the co-channel interferers are an independent
//! fraction `a = interferer_density / lambda_b` of the base stations
//! beyond the serving one, so conditioning on the serving distance scales
//! the interference deficit `f(t) - 1` linearly by `a`,
//!
//! ```text
//! reliability(t) = 1 / (1 + a (f(t) - 1)),
//! ```
//!
//! with `f` the coverage reciprocal of [`crate::hypergeometric`]
//! ([`reliability`]). The ubiquitous rate of a scheme is `eta` times its
//! rate at the largest threshold whose reliability still reaches `eta`,
//! which has the first-order closed form used throughout
//! ([`ubiquitous_rate`]).

use crate::error::{Error, Result};
use crate::hypergeometric::{self, CoverageArgs, ALPHA_MAX};

/// Shape constant of the occupancy approximation: the area of a typical
/// Poisson-Voronoi cell is well fitted by a gamma distribution with this
/// shape, which makes the void probability `(1 + load/3.5)^{-3.5}`.
const OCCUPANCY_SHAPE: f64 = 3.5;

/// Target reliability below which the first-order closed forms leave
/// their intended near-one regime; see [`NetworkParams::new`].
pub const ETA_REGIME_FLOOR: f64 = 0.9;

/// Environment parameters: densities (per abstract unit area), path-loss
/// exponent, total bandwidth in Hz, and target reliability.
///
/// Only density ratios matter analytically; absolute densities set the
/// spatial scale of the simulator and the per-BS user load.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetworkParams {
    lambda_b: f64,
    lambda_u: f64,
    alpha: f64,
    bandwidth_w: f64,
    eta: f64,
}

impl NetworkParams {
    /// Validates `lambda_b, lambda_u, bandwidth_w > 0`,
    /// `2 < alpha <= ALPHA_MAX`, `0 < eta < 1`.
    ///
    /// `eta` below [`ETA_REGIME_FLOOR`] is accepted but logged as outside
    /// the near-one regime the closed forms are expanded around.
    pub fn new(
        lambda_b: f64,
        lambda_u: f64,
        alpha: f64,
        bandwidth_w: f64,
        eta: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("lambda_b", lambda_b),
            ("lambda_u", lambda_u),
            ("bandwidth_w", bandwidth_w),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::domain(format!(
                    "{name} = {v} must be finite and positive"
                )));
            }
        }
        if !alpha.is_finite() || alpha <= 2.0 || alpha > ALPHA_MAX {
            return Err(Error::domain(format!(
                "alpha = {alpha} outside supported range (2, {ALPHA_MAX}]"
            )));
        }
        if !eta.is_finite() || eta <= 0.0 || eta >= 1.0 {
            return Err(Error::domain(format!("eta = {eta} outside (0, 1)")));
        }
        let params = Self {
            lambda_b,
            lambda_u,
            alpha,
            bandwidth_w,
            eta,
        };
        if !params.eta_in_stated_regime() {
            log::warn!(
                "eta = {eta} is below {ETA_REGIME_FLOOR}; the closed-form rate \
                 expressions are first-order accurate only near eta = 1"
            );
        }
        Ok(params)
    }

    pub fn lambda_b(&self) -> f64 {
        self.lambda_b
    }

    pub fn lambda_u(&self) -> f64 {
        self.lambda_u
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn bandwidth_w(&self) -> f64 {
        self.bandwidth_w
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Whether `eta` lies in the near-one regime the closed forms target.
    pub fn eta_in_stated_regime(&self) -> bool {
        self.eta >= ETA_REGIME_FLOOR
    }

    pub fn with_lambda_b(self, lambda_b: f64) -> Result<Self> {
        Self::new(lambda_b, self.lambda_u, self.alpha, self.bandwidth_w, self.eta)
    }

    pub fn with_lambda_u(self, lambda_u: f64) -> Result<Self> {
        Self::new(self.lambda_b, lambda_u, self.alpha, self.bandwidth_w, self.eta)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(self.lambda_b, self.lambda_u, alpha, self.bandwidth_w, self.eta)
    }

    pub fn with_eta(self, eta: f64) -> Result<Self> {
        Self::new(self.lambda_b, self.lambda_u, self.alpha, self.bandwidth_w, eta)
    }
}

/// Channel-sharing discipline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Whole band at every BS, one logical channel.
    Baseline,
    /// BS-specific reuse: each BS picks one of `m` channels for all its
    /// users.
    FrB,
    /// User-specific reuse: each user independently picks one of `m`
    /// channels.
    FrU,
}

impl SchemeKind {
    /// Stable lowercase token used in CLI arguments and CSV headers.
    pub fn token(self) -> &'static str {
        match self {
            SchemeKind::Baseline => "baseline",
            SchemeKind::FrB => "frb",
            SchemeKind::FrU => "fru",
        }
    }
}

/// A sharing scheme with its channel count. `m = 1` for the baseline by
/// construction; reuse schemes allow any `m >= 1` (both reduce to the
/// baseline at `m = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scheme {
    kind: SchemeKind,
    m: u32,
}

impl Scheme {
    pub fn new(kind: SchemeKind, m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("scheme: m must be at least 1"));
        }
        if kind == SchemeKind::Baseline && m != 1 {
            return Err(Error::domain(format!(
                "scheme: baseline has exactly one channel, got m = {m}"
            )));
        }
        Ok(Self { kind, m })
    }

    pub fn baseline() -> Self {
        Self {
            kind: SchemeKind::Baseline,
            m: 1,
        }
    }

    pub fn frb(m: u32) -> Result<Self> {
        Self::new(SchemeKind::FrB, m)
    }

    pub fn fru(m: u32) -> Result<Self> {
        Self::new(SchemeKind::FrU, m)
    }

    pub fn kind(self) -> SchemeKind {
        self.kind
    }

    pub fn m(self) -> u32 {
        self.m
    }
}

impl std::fmt::Display for Scheme {
    /// `baseline`, `frb4`, `fru16`, ...: stable labels for reports.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            SchemeKind::Baseline => write!(f, "baseline"),
            _ => write!(f, "{}{}", self.kind.token(), self.m),
        }
    }
}

/// Scheme-derived quantities; see the module table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeDerived {
    /// Effective density of BSs transmitting on the typical user's channel.
    pub interferer_density: f64,
    /// Largest bandwidth a user of this scheme can be allocated, in Hz.
    pub max_alloc: f64,
    /// Mean fraction of `max_alloc` the user keeps after sharing, in (0, 1].
    pub alloc_fraction: f64,
}

/// Reliability at one threshold together with its closed-form bounds.
///
/// `lower_lemma2 <= exact <= upper_lemma2` always, and
/// `ultra_lemma3 <= exact` with equality in the `x -> 0` limit; see
/// [`reliability`] for the formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReliabilityResult {
    pub exact: f64,
    pub lower_lemma2: f64,
    pub upper_lemma2: f64,
    pub ultra_lemma3: f64,
}

/// Probability that a BS has at least one user on a given channel when
/// users of density `lambda_serv` contend for it:
/// `1 - (1 + lambda_serv / (3.5 lambda_b))^{-3.5}`.
///
/// Monotone increasing in `lambda_serv`, decreasing in `lambda_b`, with
/// values in `[0, 1)`. An approximation from the cell-size literature; the
/// simulator measures the true fraction for comparison.
pub fn channel_occupancy(lambda_serv: f64, lambda_b: f64) -> Result<f64> {
    if !lambda_b.is_finite() || lambda_b <= 0.0 {
        return Err(Error::domain(format!(
            "channel_occupancy: lambda_b = {lambda_b} must be positive"
        )));
    }
    if !lambda_serv.is_finite() || lambda_serv < 0.0 {
        return Err(Error::domain(format!(
            "channel_occupancy: lambda_serv = {lambda_serv} must be nonnegative"
        )));
    }
    Ok(1.0 - (1.0 + lambda_serv / (OCCUPANCY_SHAPE * lambda_b)).powf(-OCCUPANCY_SHAPE))
}

/// Interferer density, per-user bandwidth cap, and mean allocation share
/// of a scheme; see the module table.
pub fn scheme_parameters(params: &NetworkParams, scheme: Scheme) -> SchemeDerived {
    let m = f64::from(scheme.m());
    let (interferer_density, share) = match scheme.kind() {
        SchemeKind::Baseline | SchemeKind::FrB => {
            let pc = channel_occupancy(params.lambda_u, params.lambda_b)
                .expect("params validated at construction");
            (
                pc * params.lambda_b / m,
                pc * params.lambda_b / params.lambda_u,
            )
        }
        SchemeKind::FrU => {
            let pc = channel_occupancy(params.lambda_u / m, params.lambda_b)
                .expect("params validated at construction");
            (
                pc * params.lambda_b,
                m * pc * params.lambda_b / params.lambda_u,
            )
        }
    };
    SchemeDerived {
        interferer_density,
        max_alloc: params.bandwidth_w / m,
        alloc_fraction: share.min(1.0),
    }
}

/// Fraction of base stations interfering on the typical user's channel,
/// `a = interferer_density / lambda_b` in `(0, 1]`.
fn interferer_ratio(params: &NetworkParams, scheme: Scheme) -> f64 {
    scheme_parameters(params, scheme).interferer_density / params.lambda_b
}

/// SIR reliability of the typical user at threshold `t > 0`, with bounds.
///
/// The serving BS is the nearest of all of them, but only an independent
/// fraction `a` of the others transmits on the user's channel. Averaging
/// the Rayleigh outage over that thinned field and the serving distance
/// gives `exact = 1 / (1 + a d(t))` with `d(t) = f(t) - 1` the full-field
/// interference deficit ([`hypergeometric::coverage_deficit`]); at `a = 1`
/// this is exactly [`hypergeometric::coverage_exact`]. The bounds replace
/// `d` by its algebraic envelope, so they hold for every `a`:
///
/// * `upper_lemma2` uses `(1+t)^{2/alpha} - 1 <= d(t)` and
///   `lower_lemma2` uses `d(t) <= c_alpha (1+t)^{2/alpha} - 1`, the
///   envelope with gap constant [`hypergeometric::c_alpha`]; at `a = 1`
///   they reduce to `(1+t)^{-2/alpha}` and `(1+t)^{-2/alpha} / c_alpha`;
/// * `ultra_lemma3` uses `d(t) <= (1+t)^{2/(alpha-2)} - 1`, a lower
///   reliability bound that is tight as `t -> 0` (the ultra-reliable
///   regime) and is what the threshold inversion solves in closed form.
pub fn reliability(params: &NetworkParams, scheme: Scheme, t: f64) -> Result<ReliabilityResult> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!(
            "reliability: threshold t = {t} must be positive"
        )));
    }
    let alpha = params.alpha;
    let a = interferer_ratio(params, scheme);
    let deficit = hypergeometric::coverage_deficit(CoverageArgs::new(t, alpha)?)?;
    // (1+t)^p - 1 via expm1/ln_1p: full relative precision at tiny t,
    // where the deficits are themselves tiny.
    let pow_deficit = |p: f64| (p * t.ln_1p()).exp_m1();
    let c = hypergeometric::c_alpha(alpha);
    let envelope = pow_deficit(2.0 / alpha);
    Ok(ReliabilityResult {
        exact: 1.0 / (1.0 + a * deficit),
        lower_lemma2: 1.0 / (1.0 + a * (c * envelope + (c - 1.0))),
        upper_lemma2: 1.0 / (1.0 + a * envelope),
        ultra_lemma3: 1.0 / (1.0 + a * pow_deficit(2.0 / (alpha - 2.0))),
    })
}

/// How [`threshold_for_reliability`] inverts the reliability constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdMode {
    /// Exact algebraic inversion of the `ultra_lemma3` form:
    /// `t = (1 + (1 - eta)/(a eta))^{(alpha-2)/2} - 1`.
    ClosedForm,
    /// Bisection on the exact reliability so that it equals `eta` to
    /// within the root tolerance.
    ExactNumeric,
}

/// First-order threshold coefficient `c_eta = (alpha/2 - 1)(1 - eta)`:
/// the leading term of the closed-form inversion as `eta -> 1`.
pub fn c_eta(alpha: f64, eta: f64) -> f64 {
    (alpha / 2.0 - 1.0) * (1.0 - eta)
}

/// First-order threshold `c_eta / a`: what the closed-form rate
/// expressions use as the operating SIR threshold. Within
/// `O((1-eta)^2)` of the [`ThresholdMode::ClosedForm`] inversion.
pub fn taylor_threshold(params: &NetworkParams, scheme: Scheme) -> f64 {
    c_eta(params.alpha, params.eta) / interferer_ratio(params, scheme)
}

/// Bisection iteration cap; 200 halvings of the bound-derived log bracket
/// is far past f64 resolution, so hitting it means a bracket failure.
const ROOT_MAX_ITERS: usize = 200;

/// Largest threshold `t` whose reliability still reaches `eta`.
///
/// `ClosedForm` inverts the `ultra_lemma3` bound exactly, so
/// `reliability(t).ultra_lemma3 == eta` up to rounding; `ExactNumeric`
/// solves `reliability(t).exact == eta` by bisection on `log t` over a
/// bracket derived from the closed-form bounds. Since the bound
/// undershoots the exact reliability, the closed-form threshold is the
/// conservative (smaller) of the two.
pub fn threshold_for_reliability(
    params: &NetworkParams,
    scheme: Scheme,
    mode: ThresholdMode,
) -> Result<f64> {
    let eta = params.eta;
    let alpha = params.alpha;
    let a = interferer_ratio(params, scheme);
    // All the closed-form inversions solve a (1+t)^p = a + (1-eta)/eta for
    // some exponent p, i.e. t = (1 + (1-eta)/(a eta))^{1/p} - 1.
    let target = (1.0 - eta) / (a * eta);
    let invert = |p: f64| (target.ln_1p() / p).exp_m1();
    match mode {
        ThresholdMode::ClosedForm => Ok(invert(2.0 / (alpha - 2.0))),
        ThresholdMode::ExactNumeric => {
            let coverage = |t: f64| -> Result<f64> {
                let d = hypergeometric::coverage_deficit(CoverageArgs::new(t, alpha)?)?;
                Ok(1.0 / (1.0 + a * d))
            };
            // The two closed-form bounds yield a certified bracket: the
            // exact reliability lies between them, so its eta-crossing
            // lies between theirs. Inverting the ultra bound gives the
            // left endpoint, inverting the Rayleigh upper bound the right
            // one.
            let t_lower = invert(2.0 / (alpha - 2.0));
            let t_upper = invert(2.0 / alpha);
            let (mut lo, mut hi) = (t_lower.ln(), t_upper.ln());
            if !(lo < hi) {
                // Rounding collapsed the bracket (eta within ulps of 1):
                // the endpoints already agree with the root.
                return Ok(t_lower);
            }
            // Sanity-check the bracket with slack for endpoint rounding.
            if coverage(lo.exp())? < eta - 1e-9 || coverage(hi.exp())? > eta + 1e-9 {
                return Err(Error::NoConvergence {
                    max_terms: ROOT_MAX_ITERS,
                    residual: f64::NAN,
                });
            }
            // Coverage is strictly decreasing in t, so bisection is safe.
            for _ in 0..ROOT_MAX_ITERS {
                let mid = 0.5 * (lo + hi);
                if coverage(mid.exp())? >= eta {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok((0.5 * (lo + hi)).exp())
        }
    }
}

/// Mean user rate at SIR threshold `t`:
/// `max_alloc * alloc_fraction * log2(1 + t)` bits/s.
pub fn rate_at_threshold(params: &NetworkParams, scheme: Scheme, t: f64) -> f64 {
    let d = scheme_parameters(params, scheme);
    d.max_alloc * d.alloc_fraction * (1.0 + t).log2()
}

/// Ubiquitous rate: the average rate deliverable with reliability `eta`,
/// `eta * rate_at_threshold` at the first-order threshold
/// [`taylor_threshold`]. The leading `eta` discounts for the `1 - eta` of
/// outage; the closed form is exactly
/// `eta * alloc_fraction * (W/M) * log2(1 + c_eta / a)`.
pub fn ubiquitous_rate(params: &NetworkParams, scheme: Scheme) -> f64 {
    params.eta * rate_at_threshold(params, scheme, taylor_threshold(params, scheme))
}
