//! Closed-form per-coordinate optima and the joint optimizers.
//!
//! For a fixed `θ` the equal-rate bottleneck is `g(ω) = min{f1, f2, f_r}`,
//! three linear functions of the power split, and its maximizer has a
//! three-branch closed form ([`optimal_omega_given_theta`]).
//!
//! For a fixed `ω` the per-user rate is `min{F1(θ), F2(θ)}` with
//! `F1 = K·log(1+Q)` falling linearly and `F2 = K·log(1 + 2Gθ/(1−θ))`
//! unimodal, `K = (1−θ)T/2`. The optimum sits at their crossing `θ1` or at
//! the peak `θ2` of `F2`, whichever comes first ([`sum_rate_given_omega`]).
//!
//! [`alternating_optimize`] alternates the two updates from `θ = 1/2`.
//! It is a coordinate ascent on a nonsmooth objective and can stop at a
//! point where neither coordinate alone improves, typically where
//! `f1 = f2 = f_r`. [`exact_theta_optimize`] instead maximizes the exact
//! per-`ω` optimum (sum constraint included) over `ω` directly.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, invalid, Error, Result};
use crate::lambert::{lambert_w0, INV_E};
use crate::model::{clamp_open, fair_sum_rate, ChannelState, PolicyPoint, SourcePowers, SystemConfig};
use crate::oracle::{grid_search, GridSpec};

/// Iteration cap of the alternating optimizer.
pub const MAX_ALTERNATING_ITERATIONS: usize = 1000;

/// Number of `ω` samples used to bracket the exact-θ search.
const EXACT_SCAN_POINTS: usize = 64;
const EXACT_OMEGA_TOL: f64 = 1e-12;

/// Linear SNR quantities that determine the optimal `θ` for a fixed power
/// split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BottleneckInputs {
    /// `Q = min{H1·P1, H2·P2}`
    pub q_cap: f64,
    /// `G = min{H1, H2}·η·(P1·H1 + P2·H2)`
    pub g_gain: f64,
    /// `S = H1·P1 + H2·P2`
    pub s_sum: f64,
}

impl BottleneckInputs {
    pub fn new(omega: f64, cfg: &SystemConfig, ch: &ChannelState) -> Self {
        Self::from_powers(SourcePowers::split(cfg.p_tot(), omega), cfg, ch)
    }

    pub fn from_powers(powers: SourcePowers, cfg: &SystemConfig, ch: &ChannelState) -> Self {
        let s1 = ch.h1() * powers.p1;
        let s2 = ch.h2() * powers.p2;
        Self { q_cap: s1.min(s2), g_gain: ch.min_gain() * cfg.eta() * powers.received(ch), s_sum: s1 + s2 }
    }

    /// `min{Q, sqrt(1+S) − 1}`: the per-user SNR cap once the multi-access
    /// sum constraint is split evenly between the two users.
    pub fn effective_q(&self) -> f64 {
        let half_sum = self.s_sum / ((1.0 + self.s_sum).sqrt() + 1.0);
        self.q_cap.min(half_sum)
    }

    pub fn with_q(self, q_cap: f64) -> Self {
        Self { q_cap, ..self }
    }
}

/// Per-user rate when the sources are the bottleneck, `K·log(1+Q)`.
pub fn source_limited_rate(theta: f64, q_cap: f64, cfg: &SystemConfig) -> f64 {
    0.5 * (1.0 - theta) * cfg.block_time() * cfg.log1p(q_cap)
}

/// Per-user rate when the relay is the bottleneck, `K·log(1 + 2Gθ/(1−θ))`.
pub fn relay_limited_rate(theta: f64, g_gain: f64, cfg: &SystemConfig) -> f64 {
    if theta >= 1.0 {
        return 0.0;
    }
    0.5 * (1.0 - theta) * cfg.block_time() * cfg.log1p(2.0 * g_gain * theta / (1.0 - theta))
}

/// Power split maximizing the equal-rate bottleneck at a fixed `θ`
/// (multi-access sum constraint not included).
pub fn optimal_omega_given_theta(theta: f64, cfg: &SystemConfig, ch: &ChannelState) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(domain(format!("theta must lie in (0, 1), got {theta}")));
    }
    let (h1, h2) = (ch.h1(), ch.h2());
    let hm_eta = ch.min_gain() * cfg.eta();
    let threshold = 1.0 / (4.0 * hm_eta + 1.0);

    let omega = if theta < threshold {
        let a = 2.0 * hm_eta * theta;
        if h2 > h1 {
            // f1 meets the falling relay line
            2.0 * h2 * hm_eta * theta / (h1 * (1.0 - theta) + a * (h2 - h1))
        } else {
            // f2 meets the rising relay line
            h2 * (1.0 - theta - a) / (h2 * (1.0 - theta) + a * (h1 - h2))
        }
    } else {
        h2 / (h1 + h2)
    };
    Ok(clamp_open(omega))
}

/// Equal-rate bottleneck `min{f1, f2, f_r}` at one `(θ, ω)`: the two
/// direct links and the relay's forwarding SNR.
pub fn equal_rate_bottleneck(theta: f64, omega: f64, cfg: &SystemConfig, ch: &ChannelState) -> f64 {
    let powers = SourcePowers::split(cfg.p_tot(), omega);
    let relay_gain = ch.min_gain() * 2.0 * cfg.eta() * theta / (1.0 - theta);
    let f1 = ch.h1() * powers.p1;
    let f2 = ch.h2() * powers.p2;
    f1.min(f2).min(relay_gain * powers.received(ch))
}

/// The unique `θ` where `F1(θ) = F2(θ)`, i.e. `Q = 2Gθ/(1−θ)`.
pub fn theta_intersection(inputs: &BottleneckInputs) -> f64 {
    let q = inputs.q_cap;
    if q <= 0.0 {
        return 0.0;
    }
    q / (q + 2.0 * inputs.g_gain)
}

/// Maximizer of `F2(θ)` over `(0, 1)`.
///
/// With `d = 2G − 1` and `W = W0(d/e)` the peak is `(1 − W/d) / (1 + W)`.
/// Near `d = 0` the ratio `W/d` comes from the series of `W0(z)/z`, and the
/// removable singularity itself evaluates to `1 − 1/e`.
pub fn theta_peak(g_gain: f64) -> Result<f64> {
    if !(g_gain.is_finite() && g_gain > 0.0) {
        return Err(domain(format!("theta_peak needs a positive finite gain, got {g_gain}")));
    }
    let d = 2.0 * g_gain - 1.0;
    if d.abs() <= 1e-9 {
        return Ok(1.0 - INV_E);
    }
    let z = d * INV_E;
    let (w, w_over_d) = if d.abs() < 1e-3 {
        let ratio = w0_over_z_series(z);
        (z * ratio, ratio * INV_E)
    } else {
        let w = lambert_w0(z)?;
        (w, w / d)
    };
    Ok(clamp_open((1.0 - w_over_d) / (1.0 + w)))
}

/// `W0(z)/z` for small `|z|`.
fn w0_over_z_series(z: f64) -> f64 {
    const C: [f64; 6] = [1.0, -1.0, 1.5, -8.0 / 3.0, 125.0 / 24.0, -54.0 / 5.0];
    C.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// The `θ` picked for one power split and the resulting sum rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaChoice {
    pub theta_star: f64,
    pub r_sum: f64,
    /// Crossing of the source- and relay-limited curves.
    pub theta1: f64,
    /// Peak of the relay-limited curve.
    pub theta2: f64,
}

/// Optimal `θ` for a fixed `ω`, chosen from `min{F1, F2}`; the returned
/// rate then applies the multi-access sum cap at that `θ`.
pub fn sum_rate_given_omega(omega: f64, cfg: &SystemConfig, ch: &ChannelState) -> Result<ThetaChoice> {
    check_omega(omega)?;
    choose_theta(BottleneckInputs::new(omega, cfg, ch), cfg)
}

/// Like [`sum_rate_given_omega`], but the crossing uses the effective cap
/// [`BottleneckInputs::effective_q`], so the chosen `θ` maximizes the full
/// equal-rate objective for this `ω`.
pub fn sum_rate_given_omega_exact(omega: f64, cfg: &SystemConfig, ch: &ChannelState) -> Result<ThetaChoice> {
    check_omega(omega)?;
    let inputs = BottleneckInputs::new(omega, cfg, ch);
    choose_theta(inputs.with_q(inputs.effective_q()), cfg)
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega < 1.0) {
        return Err(domain(format!("omega must lie in (0, 1), got {omega}")));
    }
    Ok(())
}

fn choose_theta(inputs: BottleneckInputs, cfg: &SystemConfig) -> Result<ThetaChoice> {
    let theta1 = theta_intersection(&inputs);
    let theta2 = theta_peak(inputs.g_gain)?;
    let t = cfg.block_time();
    let sum_term = |theta: f64| 0.5 * (1.0 - theta) * t * cfg.log1p(inputs.s_sum);

    let (theta_star, pair_term) = if theta1 <= theta2 {
        (theta1, (1.0 - theta1) * t * cfg.log1p(inputs.q_cap))
    } else {
        let snr = 2.0 * inputs.g_gain * theta2 / (1.0 - theta2);
        (theta2, (1.0 - theta2) * t * cfg.log1p(snr))
    };
    Ok(ThetaChoice { theta_star, r_sum: pair_term.min(sum_term(theta_star)), theta1, theta2 })
}

/// Which optimizer produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Alternating,
    Grid,
    ExactTheta,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Alternating => "alternating",
            Method::Grid => "grid",
            Method::ExactTheta => "exact-theta",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alt" | "alternating" => Ok(Method::Alternating),
            "grid" => Ok(Method::Grid),
            "exact" | "exact-theta" => Ok(Method::ExactTheta),
            other => Err(invalid(format!("unknown method {other:?} (expected alt, grid or exact)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub policy: PolicyPoint,
    /// Fair sum rate at `policy`, always re-evaluated through
    /// [`fair_sum_rate`].
    pub r_sum: f64,
    pub iterations: usize,
    pub converged: bool,
    pub method: Method,
    /// Objective value after each iteration, as the method tracks it.
    pub trace: Vec<f64>,
}

/// Alternates the closed-form `ω` and `θ` updates from `θ = 1/2` until the
/// tracked sum rate moves by at most `cfg.epsilon()`.
///
/// The tracked rate is the one the `θ` update reports (sum cap applied at
/// the chosen `θ`). Hitting [`MAX_ALTERNATING_ITERATIONS`] is reported as
/// `converged = false`.
pub fn alternating_optimize(cfg: &SystemConfig, ch: &ChannelState) -> Result<OptimizationResult> {
    let step = |theta: f64| -> Result<(f64, ThetaChoice)> {
        let omega = optimal_omega_given_theta(theta, cfg, ch)?;
        Ok((omega, sum_rate_given_omega(omega, cfg, ch)?))
    };

    let (mut omega, choice) = step(0.5)?;
    let mut theta = clamp_open(choice.theta_star);
    let mut r_pre = 0.0;
    let mut r_cur = choice.r_sum;
    let mut trace = vec![r_cur];

    while (r_cur - r_pre).abs() > cfg.epsilon() && trace.len() < MAX_ALTERNATING_ITERATIONS {
        let (next_omega, choice) = step(theta)?;
        omega = next_omega;
        theta = clamp_open(choice.theta_star);
        r_pre = r_cur;
        r_cur = choice.r_sum;
        trace.push(r_cur);
    }

    let policy = PolicyPoint::clamped(theta, omega);
    Ok(OptimizationResult {
        policy,
        r_sum: fair_sum_rate(&policy, cfg, ch),
        iterations: trace.len(),
        converged: (r_cur - r_pre).abs() <= cfg.epsilon(),
        method: Method::Alternating,
        trace,
    })
}

/// Maximizes `max_θ R(θ, ω)` over `ω`, taking the inner maximum from
/// [`sum_rate_given_omega_exact`].
///
/// A uniform scan brackets the best `ω`, then golden-section search narrows
/// the bracket to [`EXACT_OMEGA_TOL`]. Iterations count golden-section
/// steps.
pub fn exact_theta_optimize(cfg: &SystemConfig, ch: &ChannelState) -> Result<OptimizationResult> {
    let column = |omega: f64| sum_rate_given_omega_exact(omega, cfg, ch).map(|c| c.r_sum);

    let n = EXACT_SCAN_POINTS;
    let mut best = (1, f64::NEG_INFINITY);
    for i in 1..n {
        let r = column(i as f64 / n as f64)?;
        if r > best.1 {
            best = (i, r);
        }
    }
    let lo = clamp_open((best.0 - 1) as f64 / n as f64);
    let hi = clamp_open((best.0 + 1) as f64 / n as f64);

    let (omega, trace) = golden_max(column, lo, hi, EXACT_OMEGA_TOL)?;
    let theta = sum_rate_given_omega_exact(omega, cfg, ch)?.theta_star;
    let policy = PolicyPoint::clamped(theta, omega);
    Ok(OptimizationResult {
        policy,
        r_sum: fair_sum_rate(&policy, cfg, ch),
        iterations: trace.len(),
        converged: true,
        method: Method::ExactTheta,
        trace,
    })
}

fn golden_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, Vec<f64>)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut trace = Vec::new();
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        trace.push(fc.max(fd));
    }
    Ok((if fc >= fd { c } else { d }, trace))
}

/// Runs the requested optimizer; `grid` is used only by [`Method::Grid`].
pub fn optimize(
    cfg: &SystemConfig,
    ch: &ChannelState,
    method: Method,
    grid: &GridSpec,
) -> Result<OptimizationResult> {
    match method {
        Method::Alternating => alternating_optimize(cfg, ch),
        Method::ExactTheta => exact_theta_optimize(cfg, ch),
        Method::Grid => Ok(grid_search(cfg, ch, grid).best),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{bisect_intersection, golden_section_max};
    use proptest::prelude::*;

    fn cfg(p: f64, eta: f64) -> SystemConfig {
        SystemConfig::new(p, eta).unwrap()
    }

    fn ch(h1: f64, h2: f64) -> ChannelState {
        ChannelState::new(h1, h2).unwrap()
    }

    fn grid_argmax_omega(theta: f64, c: &SystemConfig, h: &ChannelState, n: usize) -> (f64, f64) {
        (1..n)
            .map(|i| i as f64 / n as f64)
            .map(|w| (w, equal_rate_bottleneck(theta, w, c, h)))
            .fold((0.0, f64::NEG_INFINITY), |b, x| if x.1 > b.1 { x } else { b })
    }

    #[test]
    fn omega_above_threshold_balances_sources() {
        let w = optimal_omega_given_theta(0.5, &cfg(1.0, 1.0), &ch(1.0, 2.0)).unwrap();
        assert!((w - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn omega_small_theta_branches_match_grid() {
        let c = cfg(1.0, 1.0);
        for (h, expected) in [(ch(1.0, 2.0), 0.4 / 1.1), (ch(2.0, 1.0), 0.7 / 1.1)] {
            let w = optimal_omega_given_theta(0.1, &c, &h).unwrap();
            assert!((w - expected).abs() < 1e-14);
            let (wg, gmax) = grid_argmax_omega(0.1, &c, &h, 1_000_000);
            assert!((w - wg).abs() <= 1e-6, "closed form {w} vs grid {wg}");
            assert!(equal_rate_bottleneck(0.1, w, &c, &h) >= gmax - 1e-12);
        }
    }

    #[test]
    fn omega_rejects_boundary_theta() {
        let c = cfg(1.0, 1.0);
        assert!(optimal_omega_given_theta(0.0, &c, &ch(1.0, 1.0)).is_err());
        assert!(optimal_omega_given_theta(1.0, &c, &ch(1.0, 1.0)).is_err());
    }

    #[test]
    fn equal_gains_pick_a_maximizer() {
        let c = cfg(3.0, 0.7);
        let h = ch(2.0, 2.0);
        let w = optimal_omega_given_theta(0.05, &c, &h).unwrap();
        let (_, gmax) = grid_argmax_omega(0.05, &c, &h, 100_000);
        assert!(equal_rate_bottleneck(0.05, w, &c, &h) >= gmax - 1e-12);
    }

    #[test]
    fn intersection_values() {
        let at = |q: f64, g: f64| theta_intersection(&BottleneckInputs { q_cap: q, g_gain: g, s_sum: q });
        assert_eq!(at(0.0, 1.0), 0.0);
        assert!((at(1.0, 1.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((at(2.0, 1.0) - 0.5).abs() < 1e-15);

        let c = cfg(1.0, 1.0);
        for (q, g) in [(1.0, 1.0), (2.0, 1.0)] {
            let f1 = |t: f64| source_limited_rate(t, q, &c);
            let f2 = |t: f64| relay_limited_rate(t, g, &c);
            let reference = bisect_intersection(f1, f2, 0.0, 1.0 - 1e-12).unwrap();
            assert!((at(q, g) - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn peak_values() {
        // roots of dF2/dθ from mpmath at 40 digits
        let cases = [
            (1.0, 0.564_376_588_560_399_8),
            (0.5, 0.632_120_558_828_557_7),
            (10.0, 0.364_507_135_129_382_24),
            (100.0, 0.237_331_217_555_651_14),
            (0.25, 0.697_982_864_427_897_2),
            (0.500_000_1, 0.632_120_539_386_784_6),
        ];
        for (g, expected) in cases {
            let t = theta_peak(g).unwrap();
            assert!((t - expected).abs() < 1e-12, "G={g}: {t} vs {expected}");
        }
        assert!(theta_peak(0.0).is_err());
        assert!(theta_peak(-1.0).is_err());
    }

    #[test]
    fn peak_matches_golden_section() {
        let c = cfg(1.0, 1.0);
        for g in [1.0, 0.5, 10.0] {
            let (x, _) = golden_section_max(|t| relay_limited_rate(t, g, &c), 1e-12, 1.0 - 1e-12).unwrap();
            assert!((theta_peak(g).unwrap() - x).abs() < 1e-9);
        }
    }

    #[test]
    fn peak_continuous_across_series_switch() {
        for d in [-1.1e-3, -0.9e-3, -2e-9, 2e-9, 0.9e-3, 1.1e-3] {
            let g = 0.5 * (1.0 + d);
            let c = cfg(1.0, 1.0);
            let (x, _) = golden_section_max(|t| relay_limited_rate(t, g, &c), 1e-12, 1.0 - 1e-12).unwrap();
            assert!((theta_peak(g).unwrap() - x).abs() < 1e-9, "d={d}");
        }
    }

    #[test]
    fn given_omega_symmetric_instance() {
        let c = cfg(2.0, 1.0);
        let h = ch(1.0, 1.0);
        let choice = sum_rate_given_omega(0.5, &c, &h).unwrap();
        assert!((choice.theta1 - 0.2).abs() < 1e-15);
        // mpmath: θ2(G=2) = 0.49815734414449237777
        assert!((choice.theta2 - 0.498_157_344_144_492_4).abs() < 1e-12);
        assert_eq!(choice.theta_star, choice.theta1);
        // min{0.8·log2 2, 0.4·log2 3}
        assert!((choice.r_sum - 0.633_985_000_288_462_5).abs() < 1e-14);
        let (t, best) = theta_column_max(0.5, &c, &h);
        assert!((t - 0.2).abs() > 1e-3, "sum cap binds, so the theorem's θ is not the column optimum");
        assert!(best > choice.r_sum);
    }

    /// 1-D θ lattice maximum of the fair sum rate at a fixed ω.
    fn theta_column_max(omega: f64, c: &SystemConfig, h: &ChannelState) -> (f64, f64) {
        let n = 200_000;
        (1..n)
            .map(|i| i as f64 / n as f64)
            .map(|t| (t, fair_sum_rate(&PolicyPoint::new(t, omega).unwrap(), c, h)))
            .fold((0.0, f64::NEG_INFINITY), |b, x| if x.1 > b.1 { x } else { b })
    }

    #[test]
    fn given_omega_vanishes_at_edge() {
        let c = cfg(1.0, 1.0);
        let h = ch(1.0, 3.0);
        assert!(sum_rate_given_omega(1e-15, &c, &h).unwrap().r_sum < 1e-12);
        assert!(sum_rate_given_omega_exact(1e-15, &c, &h).unwrap().r_sum < 1e-12);
        assert!(sum_rate_given_omega(0.0, &c, &h).is_err());
    }

    #[test]
    fn exact_closes_binding_sum_cap() {
        let c = cfg(2.0, 1.0);
        let h = ch(1.0, 1.0);
        let closed = sum_rate_given_omega(0.5, &c, &h).unwrap();
        let exact = sum_rate_given_omega_exact(0.5, &c, &h).unwrap();
        let (_, best) = theta_column_max(0.5, &c, &h);
        assert!(exact.r_sum > closed.r_sum + 1e-3);
        assert!(exact.r_sum >= best - 1e-9);
        assert!(exact.r_sum <= best + 1e-4);
    }

    #[test]
    fn exact_equals_closed_form_when_sum_cap_slack() {
        // Q well below sqrt(1+S) − 1 when one source gets most of the power
        let c = cfg(4.0, 0.6);
        let h = ch(2.0, 0.5);
        let inputs = BottleneckInputs::new(0.1, &c, &h);
        assert_eq!(inputs.q_cap, inputs.effective_q());
        let a = sum_rate_given_omega(0.1, &c, &h).unwrap();
        let b = sum_rate_given_omega_exact(0.1, &c, &h).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn alternating_symmetric_instance() {
        let r = alternating_optimize(&cfg(2.0, 1.0), &ch(1.0, 1.0)).unwrap();
        assert!(r.converged);
        assert_eq!(r.policy.omega(), 0.5);
        assert!((r.policy.theta() - 0.2).abs() < 1e-15);
        assert_eq!(r.method, Method::Alternating);
    }

    #[test]
    fn method_tags_parse() {
        assert_eq!("alt".parse::<Method>().unwrap(), Method::Alternating);
        assert_eq!("exact".parse::<Method>().unwrap(), Method::ExactTheta);
        assert_eq!("grid".parse::<Method>().unwrap(), Method::Grid);
        assert!("newton".parse::<Method>().is_err());
        assert_eq!(Method::ExactTheta.to_string(), "exact-theta");
    }

    fn instance() -> impl Strategy<Value = (SystemConfig, ChannelState)> {
        (0.1f64..10.0, 0.3f64..=1.0, 0.1f64..10.0, 0.1f64..10.0)
            .prop_map(|(p, eta, h1, h2)| (cfg(p, eta), ch(h1, h2)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn intersection_equalizes_curves(q in 1e-3f64..1e3, g in 1e-3f64..1e3) {
            let c = cfg(1.0, 1.0);
            let t = theta_intersection(&BottleneckInputs { q_cap: q, g_gain: g, s_sum: q });
            let a = source_limited_rate(t, q, &c);
            let b = relay_limited_rate(t, g, &c);
            prop_assert!((a - b).abs() <= 1e-10 * a.abs());
        }

        #[test]
        fn peak_is_stationary(g in 1e-2f64..1e3) {
            let c = cfg(1.0, 1.0);
            let t = theta_peak(g).unwrap();
            let f = |x: f64| relay_limited_rate(x, g, &c);
            let h = 1e-6;
            prop_assert!(((f(t + h) - f(t - h)) / (2.0 * h)).abs() <= 1e-6);
            prop_assert!(f(t) >= f((t + 0.01).min(1.0)) && f(t) >= f((t - 0.01).max(0.0)));
        }

        #[test]
        fn theorem_two_picks_a_candidate_and_wins((c, h) in instance(), omega in 0.01f64..0.99) {
            let choice = sum_rate_given_omega(omega, &c, &h).unwrap();
            prop_assert!(choice.theta_star == choice.theta1 || choice.theta_star == choice.theta2);
            let inputs = BottleneckInputs::new(omega, &c, &h);
            let per_user = |t: f64| source_limited_rate(t, inputs.q_cap, &c)
                .min(relay_limited_rate(t, inputs.g_gain, &c));
            let at_star = per_user(choice.theta_star);
            for i in 1..2000 {
                let t = i as f64 / 2000.0;
                prop_assert!(at_star >= per_user(t) - 1e-12);
            }
        }

        #[test]
        fn exact_never_worse((c, h) in instance(), omega in 0.01f64..0.99) {
            let a = sum_rate_given_omega(omega, &c, &h).unwrap();
            let b = sum_rate_given_omega_exact(omega, &c, &h).unwrap();
            prop_assert!(b.r_sum >= a.r_sum - 1e-12);
            let policy = PolicyPoint::clamped(b.theta_star, omega);
            let direct = fair_sum_rate(&policy, &c, &h);
            prop_assert!((direct - b.r_sum).abs() <= 1e-12 * b.r_sum.max(1e-300));
        }

        #[test]
        fn alternating_is_monotone_and_achievable((c, h) in instance()) {
            let r = alternating_optimize(&c, &h).unwrap();
            prop_assert!(r.converged);
            for w in r.trace.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12);
            }
            let direct = fair_sum_rate(&r.policy, &c, &h);
            prop_assert!((direct - r.r_sum).abs() <= 1e-12 * r.r_sum);
        }
    }
}
