//! Ground-truth stochastic-geometry simulator.
//!
//! Samples the actual BS and user point processes in a disk window
//! centered on a typical user at the origin, applies the exact
//! association and channel-assignment rules of each scheme, and measures
//! coverage, allocation share, and channel occupancy empirically. Nothing
//! here uses the analytic occupancy approximation; BS activity always
//! comes from the sampled user process, which is exactly what makes the
//! simulator a meaningful check of the closed forms.
//!
//! Randomness is counter-based ([`trial_rng`]): every trial's draws are a
//! pure function of `(seed, trial_index)`, and estimator reductions are
//! either exact integer sums or sequential passes over trial-indexed
//! buffers, so results are bit-identical for identical inputs regardless
//! of how many threads execute the trials.
//!
//! Edge effects are handled by window sizing rather than torus wrapping:
//! the disk must be large enough that the interference neglected beyond
//! it is a negligible fraction of the total, which
//! [`SimConfig::truncation_fraction`] bounds in closed form. What matters
//! near the origin is the true nearest-BS geometry, and a generous disk
//! keeps that exact.

mod grid;
mod rng;

pub use rng::trial_rng;

use crate::model::{NetworkParams, Scheme, SchemeKind};
use grid::PointGrid;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

/// A position in the simulation window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    fn dist2(self, other: Point) -> f64 {
        let (dx, dy) = (self.x - other.x, self.y - other.y);
        dx * dx + dy * dy
    }

    fn dist2_origin(self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

/// Default bound on the far-field interference fraction lost to window
/// truncation.
pub const DEFAULT_REL_TRUNCATION: f64 = 1e-3;

/// Fraction of the window radius treated as a guard ring by
/// [`estimate_occupancy`]: BSs within `GUARD_FRACTION * window_radius` of
/// the window edge are excluded from the occupancy statistic because
/// their cells are clipped.
pub const GUARD_FRACTION: f64 = 0.25;

/// Simulation window and effort.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    /// Radius of the sampling disk centered on the typical user.
    pub window_radius: f64,
    /// Number of independent trials.
    pub trials: u64,
    /// Run seed; combined with the trial index by [`trial_rng`].
    pub seed: u64,
    /// Acceptable far-field interference fraction for
    /// [`SimConfig::window_sufficient`].
    pub target_rel_truncation: f64,
}

impl SimConfig {
    /// Window radius that keeps the truncation fraction comfortably under
    /// [`DEFAULT_REL_TRUNCATION`] for `alpha = 4` and gives cell
    /// statistics (occupancy, allocation) tens of cell diameters of
    /// context: `max(30 / sqrt(lambda_b), 10 / sqrt(lambda_u))`.
    pub fn default_window_radius(params: &NetworkParams) -> f64 {
        (30.0 / params.lambda_b().sqrt()).max(10.0 / params.lambda_u().sqrt())
    }

    /// Config with the default window and truncation target.
    pub fn for_params(params: &NetworkParams, trials: u64, seed: u64) -> Self {
        Self {
            window_radius: Self::default_window_radius(params),
            trials,
            seed,
            target_rel_truncation: DEFAULT_REL_TRUNCATION,
        }
    }

    /// Closed-form bound on the expected fraction of interference lost
    /// beyond the window.
    ///
    /// Mean interference from BSs beyond radius `r0` scales as
    /// `2 pi lambda_b r0^{2-alpha} / (alpha - 2)`; taking the total as the
    /// same integral started at the mean serving distance
    /// `1 / (2 sqrt(lambda_b))` gives the ratio
    /// `(2 R sqrt(lambda_b))^{2 - alpha}`. Conservative for the schemes
    /// here, whose interferer density never exceeds `lambda_b`.
    pub fn truncation_fraction(&self, params: &NetworkParams) -> f64 {
        (2.0 * self.window_radius * params.lambda_b().sqrt()).powf(2.0 - params.alpha())
    }

    /// Whether the window passes the truncation check above.
    pub fn window_sufficient(&self, params: &NetworkParams) -> bool {
        self.truncation_fraction(params) < self.target_rel_truncation
    }
}

/// A Monte Carlo statistic with a normal-approximation confidence
/// interval: `mean +- half_width_95` where
/// `half_width_95 = 1.96 * sample_std / sqrt(n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub half_width_95: f64,
    /// Number of trials behind the estimate.
    pub n: u64,
}

fn bernoulli_estimate(successes: u64, n: u64) -> Estimate {
    let mean = successes as f64 / n as f64;
    let half_width_95 = if n > 1 {
        1.96 * (mean * (1.0 - mean) / (n as f64 - 1.0)).sqrt()
    } else {
        f64::INFINITY
    };
    Estimate {
        mean,
        half_width_95,
        n,
    }
}

fn mean_std_estimate(values: &[f64]) -> Estimate {
    let n = values.len() as u64;
    let mean = values.iter().sum::<f64>() / n as f64;
    let half_width_95 = if n > 1 {
        let var =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
        1.96 * (var / n as f64).sqrt()
    } else {
        f64::INFINITY
    };
    Estimate {
        mean,
        half_width_95,
        n,
    }
}

/// Counters surfaced alongside coverage estimates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Realizations redrawn because the window held no BS at all. Their
    /// probability is `exp(-lambda_b pi R^2)`; a visible count means the
    /// window is far too small.
    pub zero_bs_redraws: u64,
    /// Trials whose interferer set was empty (infinite SIR, counted as
    /// covered at every threshold). Frequent infinities likewise flag a
    /// window-too-small artifact at the configured densities.
    pub infinite_sir: u64,
}

/// Empirical coverage at each requested threshold, with diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageEstimate {
    /// `(threshold, estimate)` in the threshold order given by the caller.
    pub per_threshold: Vec<(f64, Estimate)>,
    pub diagnostics: Diagnostics,
}

/// One sampled network with the typical user at the origin.
///
/// The typical user is added on top of the sampled user process (its
/// conditioning does not disturb the Poisson law of the rest), so `ue`
/// holds the ambient users only.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub scheme: Scheme,
    pub bs: Vec<Point>,
    pub ue: Vec<Point>,
    /// Index into `bs` of the typical user's (nearest) serving BS.
    pub serving: u32,
    /// Per-user index into `bs` of the strictly nearest BS, floating-point
    /// ties resolved toward the smaller index.
    pub ue_assoc: Vec<u32>,
    /// Per-BS count of associated ambient users.
    pub bs_load: Vec<u32>,
    /// BS-specific reuse only: the channel each BS serves all its users
    /// on; empty for other schemes.
    pub bs_channel: Vec<u16>,
    /// User-specific reuse only: each ambient user's channel; empty for
    /// other schemes.
    pub ue_channel: Vec<u16>,
    /// Channel the typical user is served on (0 when there is one channel).
    pub typical_channel: u16,
    /// Zero-BS redraws consumed while sampling this realization.
    pub redraws: u32,
}

impl Realization {
    /// Whether BS `j` transmits on the typical user's channel, i.e. is an
    /// interferer when `j != serving`. A BS transmits on a channel only
    /// if at least one of its users occupies it; activity is derived from
    /// the sampled user process, never from the occupancy approximation.
    pub fn transmits_on_typical_channel(&self, j: usize) -> bool {
        match self.scheme.kind() {
            SchemeKind::Baseline => self.bs_load[j] > 0,
            SchemeKind::FrB => {
                self.bs_load[j] > 0 && self.bs_channel[j] == self.typical_channel
            }
            SchemeKind::FrU => self
                .ue_channel
                .iter()
                .zip(&self.ue_assoc)
                .any(|(&ch, &a)| a as usize == j && ch == self.typical_channel),
        }
    }
}

/// `(r^2)^{alpha/2}` with a fast path for the common `alpha = 4`.
#[derive(Clone, Copy)]
enum PathLossPow {
    Quartic,
    General(f64),
}

impl PathLossPow {
    fn new(alpha: f64) -> Self {
        if alpha == 4.0 {
            PathLossPow::Quartic
        } else {
            PathLossPow::General(alpha / 2.0)
        }
    }

    #[inline]
    fn eval(self, d2: f64) -> f64 {
        match self {
            PathLossPow::Quartic => d2 * d2,
            PathLossPow::General(half_alpha) => d2.powf(half_alpha),
        }
    }
}

fn poisson_count(rng: &mut ChaCha8Rng, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive finite mean").sample(rng) as usize
}

#[inline]
fn disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Point {
    // Rejection from the bounding square: cheaper and better conditioned
    // than polar transforms, at an average 4/pi draws per point.
    loop {
        let x = rng.gen_range(-radius..radius);
        let y = rng.gen_range(-radius..radius);
        if x * x + y * y <= radius * radius {
            return Point { x, y };
        }
    }
}

/// Reusable per-thread buffers; contents are fully rewritten every trial.
#[derive(Default)]
struct Scratch {
    bs: Vec<Point>,
    ue: Vec<Point>,
    bs_d2: Vec<f64>,
    assoc: Vec<u32>,
    load: Vec<u32>,
    grid: PointGrid,
    fades: Vec<f64>,
    bs_channel: Vec<u16>,
    ue_channel: Vec<u16>,
    /// Per-scheme activity flags, flattened `[scheme][bs]`.
    active: Vec<bool>,
}

struct Geometry {
    serving: u32,
    serving_d2: f64,
    redraws: u32,
}

/// Samples BS and user processes and associates every user with its
/// nearest BS. Draw order (fixed, part of the determinism contract):
/// BS count (redrawn while zero), BS positions, user count, user
/// positions; channel draws follow per scheme, then fading.
fn sample_geometry(
    params: &NetworkParams,
    cfg: &SimConfig,
    rng: &mut ChaCha8Rng,
    s: &mut Scratch,
) -> Geometry {
    let r = cfg.window_radius;
    let area = std::f64::consts::PI * r * r;

    let mut redraws = 0u32;
    let n_b = loop {
        let n = poisson_count(rng, params.lambda_b() * area);
        if n > 0 {
            break n;
        }
        redraws += 1;
    };
    s.bs.clear();
    s.bs.extend((0..n_b).map(|_| disk_point(rng, r)));
    s.bs_d2.clear();
    s.bs_d2.extend(s.bs.iter().map(|p| p.dist2_origin()));

    let n_u = poisson_count(rng, params.lambda_u() * area);
    s.ue.clear();
    s.ue.extend((0..n_u).map(|_| disk_point(rng, r)));

    // Cell edge near the mean BS spacing keeps nearest-BS queries at a
    // handful of candidates each.
    let target_cell = 1.0 / params.lambda_b().sqrt();
    s.grid.build(&s.bs, r, target_cell.min(2.0 * r));
    let (serving, serving_d2) = s.grid.nearest(&s.bs, 0.0, 0.0);

    s.load.clear();
    s.load.resize(n_b, 0);
    s.assoc.clear();
    s.assoc.reserve(n_u);
    for i in 0..n_u {
        let (a, _) = s.grid.nearest(&s.bs, s.ue[i].x, s.ue[i].y);
        s.assoc.push(a);
        s.load[a as usize] += 1;
    }

    Geometry {
        serving,
        serving_d2,
        redraws,
    }
}

/// Draws the scheme's channel assignments and fills `active` with the
/// per-BS "transmits on the typical user's channel" flags. Returns the
/// typical user's channel.
fn overlay_scheme(
    scheme: Scheme,
    serving: u32,
    rng: &mut ChaCha8Rng,
    s: &mut Scratch,
    active: usize,
) -> u16 {
    assert!(
        scheme.m() <= u32::from(u16::MAX) + 1,
        "channel indices are stored as u16"
    );
    let n_b = s.bs.len();
    let range = active * n_b..(active + 1) * n_b;
    match scheme.kind() {
        SchemeKind::Baseline => {
            for (flag, &load) in s.active[range].iter_mut().zip(&s.load) {
                *flag = load > 0;
            }
            0
        }
        SchemeKind::FrB => {
            let m = scheme.m();
            s.bs_channel.clear();
            s.bs_channel
                .extend((0..n_b).map(|_| rng.gen_range(0..m) as u16));
            let tc = s.bs_channel[serving as usize];
            let flags = &mut s.active[range];
            for j in 0..n_b {
                flags[j] = s.load[j] > 0 && s.bs_channel[j] == tc;
            }
            tc
        }
        SchemeKind::FrU => {
            let m = scheme.m();
            s.ue_channel.clear();
            s.ue_channel
                .extend((0..s.ue.len()).map(|_| rng.gen_range(0..m) as u16));
            let tc = rng.gen_range(0..m) as u16;
            let flags = &mut s.active[range];
            flags.iter_mut().for_each(|f| *f = false);
            for (&ch, &a) in s.ue_channel.iter().zip(&s.assoc) {
                if ch == tc {
                    flags[a as usize] = true;
                }
            }
            tc
        }
    }
}

/// Samples one complete realization for a scheme.
///
/// Deterministic in `(cfg.seed, trial_index)`: the same pair yields a
/// bit-identical realization on every call, in any trial order.
pub fn sample_realization(
    params: &NetworkParams,
    scheme: Scheme,
    cfg: &SimConfig,
    trial_index: u64,
) -> Realization {
    let mut rng = trial_rng(cfg.seed, trial_index);
    let mut s = Scratch::default();
    let geo = sample_geometry(params, cfg, &mut rng, &mut s);
    s.active.resize(s.bs.len(), false);
    let typical_channel = overlay_scheme(scheme, geo.serving, &mut rng, &mut s, 0);
    Realization {
        scheme,
        bs: s.bs,
        ue: s.ue,
        serving: geo.serving,
        ue_assoc: s.assoc,
        bs_load: s.load,
        bs_channel: s.bs_channel,
        ue_channel: s.ue_channel,
        typical_channel,
        redraws: geo.redraws,
    }
}

/// One SIR draw for the typical user of a realization: unit-mean
/// exponential power fades, one per BS in index order, over the sampled
/// geometry. Returns `+inf` when no BS interferes (covered at any finite
/// threshold).
pub fn sir_sample(real: &Realization, params: &NetworkParams, rng: &mut ChaCha8Rng) -> f64 {
    let pl = PathLossPow::new(params.alpha());
    let origin = Point { x: 0.0, y: 0.0 };
    let serving = real.serving as usize;
    let mut signal = 0.0;
    let mut interference = 0.0;
    for (j, &bs) in real.bs.iter().enumerate() {
        let fade: f64 = rng.sample(Exp1);
        if j == serving {
            signal = fade / pl.eval(bs.dist2(origin));
        } else if real.transmits_on_typical_channel(j) {
            interference += fade / pl.eval(bs.dist2(origin));
        }
    }
    if interference == 0.0 {
        f64::INFINITY
    } else {
        signal / interference
    }
}

fn assert_thresholds(thresholds: &[f64]) {
    assert!(!thresholds.is_empty(), "need at least one threshold");
    assert!(
        thresholds.windows(2).all(|w| w[0] < w[1]),
        "thresholds must be strictly increasing"
    );
    assert!(
        thresholds.iter().all(|&t| t.is_finite() && t > 0.0),
        "thresholds must be positive and finite"
    );
}

#[derive(Clone)]
struct CoverageAcc {
    /// Covered-trial counts, flattened `[scheme][threshold]`.
    covered: Vec<u64>,
    infinite: Vec<u64>,
    redraws: u64,
}

impl CoverageAcc {
    fn zero(ns: usize, nt: usize) -> Self {
        Self {
            covered: vec![0; ns * nt],
            infinite: vec![0; ns],
            redraws: 0,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.covered.iter_mut().zip(&other.covered) {
            *a += b;
        }
        for (a, b) in self.infinite.iter_mut().zip(&other.infinite) {
            *a += b;
        }
        self.redraws += other.redraws;
        self
    }
}

/// Empirical coverage for several schemes over one shared set of network
/// draws (common random numbers): each trial samples geometry once,
/// overlays every scheme's channel assignment, draws one fading vector,
/// and evaluates every scheme's SIR against every threshold from the same
/// randomness. Estimates across schemes and thresholds are therefore
/// positively correlated, which sharpens comparisons between them; each
/// marginal estimate is unbiased exactly as if run alone.
///
/// `thresholds` must be strictly increasing and positive. Trials may run
/// on any number of threads; the counts are merged exactly, so the result
/// is a pure function of `(params, schemes, cfg, thresholds)`.
pub fn estimate_coverage_multi(
    params: &NetworkParams,
    schemes: &[Scheme],
    cfg: &SimConfig,
    thresholds: &[f64],
) -> Vec<CoverageEstimate> {
    assert!(!schemes.is_empty(), "need at least one scheme");
    assert!(cfg.trials >= 1, "need at least one trial");
    assert_thresholds(thresholds);
    let (ns, nt) = (schemes.len(), thresholds.len());
    let pl = PathLossPow::new(params.alpha());

    let acc = (0..cfg.trials)
        .into_par_iter()
        .fold(
            || (Scratch::default(), CoverageAcc::zero(ns, nt)),
            |(mut s, mut acc), trial| {
                let mut rng = trial_rng(cfg.seed, trial);
                let geo = sample_geometry(params, cfg, &mut rng, &mut s);
                acc.redraws += u64::from(geo.redraws);
                let n_b = s.bs.len();
                s.active.clear();
                s.active.resize(ns * n_b, false);
                // Channels for every scheme first, then one shared fading
                // vector: the draw order is part of the determinism
                // contract.
                for (si, &scheme) in schemes.iter().enumerate() {
                    overlay_scheme(scheme, geo.serving, &mut rng, &mut s, si);
                }
                s.fades.clear();
                s.fades
                    .extend((0..n_b).map(|_| rng.sample::<f64, _>(Exp1)));

                let serving = geo.serving as usize;
                let signal = s.fades[serving] / pl.eval(geo.serving_d2);
                for si in 0..ns {
                    let flags = &s.active[si * n_b..(si + 1) * n_b];
                    let mut interference = 0.0;
                    for j in 0..n_b {
                        if flags[j] && j != serving {
                            interference += s.fades[j] / pl.eval(s.bs_d2[j]);
                        }
                    }
                    let sir = if interference == 0.0 {
                        acc.infinite[si] += 1;
                        f64::INFINITY
                    } else {
                        signal / interference
                    };
                    for (k, &t) in thresholds.iter().enumerate() {
                        if sir >= t {
                            acc.covered[si * nt + k] += 1;
                        } else {
                            break; // thresholds ascend
                        }
                    }
                }
                (s, acc)
            },
        )
        .map(|(_, acc)| acc)
        .reduce(|| CoverageAcc::zero(ns, nt), CoverageAcc::merge);

    (0..ns)
        .map(|si| CoverageEstimate {
            per_threshold: thresholds
                .iter()
                .enumerate()
                .map(|(k, &t)| (t, bernoulli_estimate(acc.covered[si * nt + k], cfg.trials)))
                .collect(),
            diagnostics: Diagnostics {
                zero_bs_redraws: acc.redraws,
                infinite_sir: acc.infinite[si],
            },
        })
        .collect()
}

/// Empirical coverage of one scheme; see [`estimate_coverage_multi`].
pub fn estimate_coverage(
    params: &NetworkParams,
    scheme: Scheme,
    cfg: &SimConfig,
    thresholds: &[f64],
) -> CoverageEstimate {
    estimate_coverage_multi(params, &[scheme], cfg, thresholds)
        .pop()
        .expect("one scheme in, one estimate out")
}

/// Empirical mean of `1 / N`, where `N >= 1` counts the users sharing the
/// typical user's BS *and channel*, the typical user included. This is
/// the simulator's counterpart of the closed-form allocation fraction.
pub fn estimate_alloc_fraction(
    params: &NetworkParams,
    scheme: Scheme,
    cfg: &SimConfig,
) -> Estimate {
    assert!(cfg.trials >= 1, "need at least one trial");
    let values: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map_init(Scratch::default, |s, trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let geo = sample_geometry(params, cfg, &mut rng, s);
            let sharing = match scheme.kind() {
                // Every user of the serving BS shares its one serving
                // channel (the whole band for the baseline).
                SchemeKind::Baseline | SchemeKind::FrB => s.load[geo.serving as usize] as u64,
                SchemeKind::FrU => {
                    let m = scheme.m();
                    let tc = rng.gen_range(0..m);
                    // Only serving-cell users matter, so only they draw a
                    // channel here; each draw is iid uniform either way.
                    s.assoc
                        .iter()
                        .filter(|&&a| a == geo.serving)
                        .filter(|_| rng.gen_range(0..m) == tc)
                        .count() as u64
                }
            };
            1.0 / (1.0 + sharing as f64)
        })
        .collect();
    mean_std_estimate(&values)
}

/// Empirical fraction of BSs with at least one user on a probed channel,
/// when users of density `channel_load` contend for it. BSs in the outer
/// [`GUARD_FRACTION`] of the window are excluded: their cells are clipped
/// by the boundary, which would bias the load low.
pub fn estimate_occupancy(params: &NetworkParams, cfg: &SimConfig, channel_load: f64) -> Estimate {
    assert!(cfg.trials >= 1, "need at least one trial");
    assert!(
        channel_load.is_finite() && channel_load >= 0.0,
        "channel_load must be nonnegative"
    );
    // The probed channel's users form a thinned process of density
    // channel_load; sample them directly.
    let probe = params
        .with_lambda_u(channel_load.max(f64::MIN_POSITIVE))
        .expect("validated params stay valid");
    let inner2 = (1.0 - GUARD_FRACTION) * cfg.window_radius;
    let inner2 = inner2 * inner2;

    let values: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map_init(Scratch::default, |s, trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let _ = sample_geometry(&probe, cfg, &mut rng, s);
            let (mut occupied, mut total) = (0u64, 0u64);
            for (j, &d2) in s.bs_d2.iter().enumerate() {
                if d2 <= inner2 {
                    total += 1;
                    if s.load[j] > 0 {
                        occupied += 1;
                    }
                }
            }
            if total == 0 {
                0.0
            } else {
                occupied as f64 / total as f64
            }
        })
        .collect();
    mean_std_estimate(&values)
}
