//! Gauss-hypergeometric machinery behind the coverage probability.
//!
//! Under nearest-BS association with unit-mean Rayleigh power fading and
//! path-loss exponent `alpha`, the typical user's SIR coverage probability
//! at threshold `x`, with every other base station interfering, is the
//! reciprocal of
//!
//! ```text
//! f(x) = 2F1(1, -s; 1 - s; -x),    s = 2 / alpha in (0, 1).
//! ```
//!
//! When only an independent fraction of the interferers transmit, the
//! deficit `f(x) - 1` scales by that fraction (see
//! [`crate::model::reliability`]), so [`coverage_deficit`] is the primitive
//! and `coverage = 1 / (1 + deficit)`.
//!
//! `f` is evaluated through routes chosen by argument size:
//!
//! * `x < 1/2`: the defining series at `z = -x`, which converges
//!   geometrically with ratio `x` (and only converges at all for `x < 1`);
//! * `x >= 1/2`: the connection formula splitting off the algebraic
//!   growth,
//!
//!   ```text
//!   f(x) = C(alpha) x^s + (2/(alpha+2)) u 2F1(1, 1; 2+s; u),  u = 1/(1+x),
//!   ```
//!
//!   whose series argument stays in `(0, 2/3]`. `C(alpha) =
//!   (2 pi / alpha) csc(2 pi / alpha)` is [`c_alpha`], the supremum of
//!   `f(x) / (1+x)^s`.
//!
//! [`coverage_pfaff`] is an independent cross-check: the Pfaff map
//! `z -> z/(z-1)` turns `f` into `(1+x)^s 2F1(-s, -s; 1-s; x/(1+x))`, a
//! series with nonnegative terms whose argument lies in `[0, 1)` for every
//! `x >= 0`. Near the endpoint the decay is polynomial rather than
//! geometric, so this route gets its own iteration budget and a tail rule
//! matched to its coefficient decay.
//!
//! All series share one kernel summing the term recurrence with
//! compensated addition; each stopping rule certifies a bound on the
//! discarded tail for the family it is used with, instead of guessing
//! from the size of the last term.

use crate::error::{Error, Result};

/// Relative termination tolerance of [`gauss_2f1`] and the internal
/// coverage routes.
pub const SERIES_TOL: f64 = 1e-14;

/// Iteration cap of [`gauss_2f1`] and the internal coverage routes.
pub const SERIES_MAX_TERMS: usize = 10_000;

/// Relative termination tolerance of the [`coverage_pfaff`] cross-check.
pub const PFAFF_TOL: f64 = 1e-11;

/// Iteration cap of the [`coverage_pfaff`] cross-check. Its series
/// argument `x/(1+x)` approaches 1 for large `x`, where term decay is
/// polynomial (`~ n^{-2-s}`), so the cap is far above [`SERIES_MAX_TERMS`];
/// a few million terms suffice for `x = 1e6` at the tolerance above.
pub const PFAFF_MAX_TERMS: usize = 100_000_000;

/// Largest supported path-loss exponent. Larger values are untested; the
/// exponent must exceed 2 for interference to have finite mean.
pub const ALPHA_MAX: f64 = 8.0;

/// Termination rule for [`sum_2f1`], each certifying a different tail
/// bound. `term` is the last term added and `n >= 1` its index.
#[derive(Clone, Copy)]
enum TailRule {
    /// Stop when `|term| < tol |sum|`. No tail certificate; this is the
    /// documented contract of the public evaluator.
    TermBelow,
    /// Stop when `|term| q / (1 - q) < tol |sum|` with `q = |z|`. Valid
    /// when successive term ratios past the first term have magnitude at
    /// most `|z|`, which holds for both coverage families used here.
    Geometric,
    /// Stop when `|term| n < tol |sum|`. Valid for `2F1(-s, -s; 1-s; w)`
    /// with `0 < s < 1`, `0 <= w <= 1`: terms are nonnegative and the
    /// coefficient ratios telescope to `tail <= term * n`.
    Polynomial,
}

/// Sums `2F1(a, b; c; z)` by the term recurrence
/// `t_{n+1} = t_n (a+n)(b+n) z / ((c+n)(1+n))`, `t_0 = 1`, with Kahan
/// compensation. Never forms Gamma-function ratios, so there is no
/// overflow or cancellation between huge prefactors.
///
/// With `include_leading = false` the leading 1 is left out and the sum of
/// the remaining terms is returned to full relative precision, which is
/// what quantities of the form `2F1(..) - 1` need when the series is close
/// to 1; subtracting afterwards would cancel.
fn sum_2f1(
    a: f64,
    b: f64,
    c: f64,
    z: f64,
    tol: f64,
    max_terms: usize,
    rule: TailRule,
    include_leading: bool,
) -> Result<f64> {
    let mut sum = if include_leading { 1.0_f64 } else { 0.0_f64 };
    let mut comp = 0.0_f64;
    let mut term = 1.0_f64;
    for n in 0..max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (1.0 + nf)) * z;
        if term == 0.0 {
            // Terminating series (a or b a nonpositive integer), z = 0, or
            // underflow past any useful tolerance.
            return Ok(sum);
        }
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        // `term` now carries index n + 1.
        let tail_bound = match rule {
            TailRule::TermBelow => term.abs(),
            TailRule::Geometric => term.abs() * z.abs() / (1.0 - z.abs()),
            TailRule::Polynomial => term.abs() * (nf + 1.0),
        };
        if n >= 1 && tail_bound < tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        max_terms,
        residual: term.abs(),
    })
}

/// Evaluates the Gauss hypergeometric series `2F1(a, b; c; z)` for real
/// parameters, `z < 1`, and `c` not a nonpositive integer.
///
/// Terminates when the next term's magnitude falls below [`SERIES_TOL`]
/// times the partial sum, or errors after [`SERIES_MAX_TERMS`] terms. For
/// `z <= -1/2` the argument is first mapped into the convergent regime by
/// the Pfaff transformation `2F1(a,b;c;z) = (1-z)^{-b} 2F1(c-a,b;c;w)`
/// (or its `a`/`b`-swapped twin), `w = z/(z-1) in (1/3, 1)`; summing the
/// defining series there would diverge for `z < -1` and crawl otherwise.
///
/// Only the parameter families needed by the coverage expressions are
/// exercised by this crate; the evaluator is not a general-purpose `2F1`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::domain("gauss_2f1: arguments must be finite"));
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::domain(format!(
            "gauss_2f1: c = {c} is a nonpositive integer (series pole)"
        )));
    }
    if z >= 1.0 {
        return Err(Error::domain(format!("gauss_2f1: z = {z} not below 1")));
    }
    if z > -0.5 {
        return sum_2f1(a, b, c, z, SERIES_TOL, SERIES_MAX_TERMS, TailRule::TermBelow, true);
    }
    let w = z / (z - 1.0);
    // Two Pfaff orientations are available; pick the one with the smaller
    // transformed parameter pair so the early terms stay tame.
    let swap_a = a.abs().max((c - b).abs()) <= (c - a).abs().max(b.abs());
    let (p, q, e) = if swap_a { (a, c - b, a) } else { (c - a, b, b) };
    let f = sum_2f1(p, q, c, w, SERIES_TOL, SERIES_MAX_TERMS, TailRule::TermBelow, true)?;
    Ok((1.0 - z).powf(-e) * f)
}

/// Arguments of the coverage kernel: normalized threshold and path-loss
/// exponent. Constructed through [`CoverageArgs::new`], which enforces
/// `x >= 0` and `2 < alpha <= ALPHA_MAX`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverageArgs {
    x: f64,
    alpha: f64,
}

impl CoverageArgs {
    pub fn new(x: f64, alpha: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::domain(format!(
                "coverage: x = {x} must be finite and nonnegative"
            )));
        }
        if !alpha.is_finite() || alpha <= 2.0 || alpha > ALPHA_MAX {
            return Err(Error::domain(format!(
                "coverage: alpha = {alpha} outside supported range (2, {ALPHA_MAX}]"
            )));
        }
        Ok(Self { x, alpha })
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }
}

/// `(2 pi / alpha) csc(2 pi / alpha)`: the supremum of
/// `f(x) / (1+x)^{2/alpha}`, reached as `x -> infinity`. Appears both in
/// the connection formula and as the gap constant of the algebraic
/// reliability bounds (see [`crate::model::reliability`]).
pub fn c_alpha(alpha: f64) -> f64 {
    let u = 2.0 * std::f64::consts::PI / alpha;
    u / u.sin()
}

/// Split point between the direct-series and connection-formula routes of
/// [`coverage_exact`]. Both series converge geometrically with ratio at
/// most 2/3 on their side of the split.
const DIRECT_LIMIT: f64 = 0.5;

/// `f(x) - 1 >= 0`, the interference-to-signal deficit behind the coverage
/// probability: `coverage = 1 / (1 + deficit)`.
///
/// Evaluated to full relative precision even for tiny `x` (where
/// `deficit ~ 2x/(alpha-2)`) by summing the defining series without its
/// leading 1; computing `f` first and subtracting would cancel. Partial
/// thinning of the interferer field scales this quantity linearly (see
/// [`crate::model::reliability`]), which is why it is exposed on its own
/// rather than only through [`coverage_exact`].
pub fn coverage_deficit(args: CoverageArgs) -> Result<f64> {
    let (x, alpha) = (args.x, args.alpha);
    let s = 2.0 / alpha;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < DIRECT_LIMIT {
        return sum_2f1(
            1.0,
            -s,
            1.0 - s,
            -x,
            SERIES_TOL,
            SERIES_MAX_TERMS,
            TailRule::Geometric,
            false,
        );
    }
    // Connection formula: splits off the exact x^s growth; the remaining
    // series argument u = 1/(1+x) is at most 2/3 here. f(x) >= f(1/2) ~ 1.43
    // on this side, so subtracting the 1 costs under a digit.
    let u = 1.0 / (1.0 + x);
    let tail = sum_2f1(
        1.0,
        1.0,
        2.0 + s,
        u,
        SERIES_TOL,
        SERIES_MAX_TERMS,
        TailRule::Geometric,
        true,
    )?;
    Ok(c_alpha(alpha) * x.powf(s) + 2.0 / (alpha + 2.0) * u * tail - 1.0)
}

/// Coverage probability `1 / f(x)` of the typical user at normalized
/// threshold `x`. Value in `(0, 1]`; equals 1 at `x = 0` and is strictly
/// decreasing in `x`.
pub fn coverage_exact(args: CoverageArgs) -> Result<f64> {
    Ok(1.0 / (1.0 + coverage_deficit(args)?))
}

/// Coverage probability through the Pfaff-transformed series,
/// `(1+x)^{-s} / 2F1(-s, -s; 1-s; x/(1+x))`.
///
/// Mathematically identical to [`coverage_exact`]; kept as an independent
/// evaluation path (different series family on both sides of the
/// [`coverage_exact`] route split) so the two can cross-check each other.
/// The `(1+x)^{-s}` prefactor is the algebraic upper reliability bound,
/// and the series it is divided by grows from 1 to [`c_alpha`] as `x`
/// sweeps `[0, infinity)`.
pub fn coverage_pfaff(args: CoverageArgs) -> Result<f64> {
    let (x, alpha) = (args.x, args.alpha);
    if x == 0.0 {
        // The transformed series is exactly 1 here; returning early keeps
        // the boundary exact without evaluating powf at the endpoint.
        return Ok(1.0);
    }
    let s = 2.0 / alpha;
    let w = x / (1.0 + x);
    let f = sum_2f1(
        -s,
        -s,
        1.0 - s,
        w,
        PFAFF_TOL,
        PFAFF_MAX_TERMS,
        TailRule::Polynomial,
        true,
    )?;
    Ok((1.0 + x).powf(-s) / f)
}
