//! Solver-versus-oracle verification on seeded random instances.
//!
//! Every closed form is compared with a derivative-free oracle that shares
//! no code with it: crossings with bisection, peaks with golden section,
//! the power split with a dense grid, and the joint optimum with the 2-D
//! grid search.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::model::{ChannelState, SystemConfig};
use crate::oracle::{bisect_intersection, golden_section_max, grid_search, GridSpec};
use crate::solver::{
    alternating_optimize, equal_rate_bottleneck, exact_theta_optimize, optimal_omega_given_theta,
    relay_limited_rate, source_limited_rate, theta_intersection, theta_peak, BottleneckInputs,
};

pub const INTERSECTION_TOL: f64 = 1e-9;
pub const PEAK_TOL: f64 = 1e-8;
pub const OMEGA_GRID_POINTS: usize = 100_000;
pub const OMEGA_TOL: f64 = 1e-6;
pub const JOINT_TOL: f64 = 1e-3;
pub const DISCREPANCY_EQUAL_TOL: f64 = 1e-10;
pub const DISCREPANCY_MIN_GAP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub instances: usize,
    pub seed: u64,
    /// Nodes per axis of the joint grid search.
    pub grid_n: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { instances: 100, seed: 42, grid_n: 2001 }
    }
}

/// A random system plus one random policy coordinate pair used by the
/// per-coordinate checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instance {
    pub cfg: SystemConfig,
    pub ch: ChannelState,
    pub omega: f64,
    pub theta: f64,
}

/// Draws `H1, H2, P_tot ∈ [0.1, 10]`, `η ∈ [0.3, 1]`, `ω ∈ [0.05, 0.95]`
/// and `θ ∈ [0.01, 0.99]` uniformly from a ChaCha8 stream.
pub fn sample_instances(n: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let h1 = rng.gen_range(0.1..=10.0);
            let h2 = rng.gen_range(0.1..=10.0);
            let p = rng.gen_range(0.1..=10.0);
            let eta = rng.gen_range(0.3..=1.0);
            let omega = rng.gen_range(0.05..=0.95);
            let theta = rng.gen_range(0.01..=0.99);
            Instance {
                cfg: SystemConfig::new(p, eta).expect("sampled config is valid"),
                ch: ChannelState::new(h1, h2).expect("sampled gains are valid"),
                omega,
                theta,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for ClaimOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Joint optimum of one instance from each optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointOutcome {
    pub grid_max: f64,
    pub discretization_bound: f64,
    pub sum_cap_binding: bool,
    pub alternating: f64,
    pub alternating_iterations: usize,
    pub exact: f64,
}

impl JointOutcome {
    pub fn alternating_gap(&self) -> f64 {
        self.grid_max - self.alternating
    }

    pub fn exact_gap(&self) -> f64 {
        self.grid_max - self.exact
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub claims: Vec<ClaimOutcome>,
    pub joint: Vec<JointOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    /// Largest `|grid max − alternating|` over all instances.
    pub fn max_gap(&self) -> f64 {
        self.joint.iter().map(|j| j.alternating_gap().abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.options;
        writeln!(f, "instances={} seed={} grid={}x{}", o.instances, o.seed, o.grid_n, o.grid_n)?;
        writeln!(f, "max_gap={:.3e}", self.max_gap())?;
        let binding: Vec<f64> =
            self.joint.iter().filter(|j| j.sum_cap_binding).map(|j| j.alternating_gap()).collect();
        let slack: Vec<f64> =
            self.joint.iter().filter(|j| !j.sum_cap_binding).map(|j| j.alternating_gap()).collect();
        writeln!(f, "gap_distribution binding {}", Summary::of(&binding))?;
        writeln!(f, "gap_distribution slack {}", Summary::of(&slack))?;
        let exact: Vec<f64> = self.joint.iter().map(|j| j.exact_gap()).collect();
        writeln!(f, "exact_gap_distribution all {}", Summary::of(&exact))?;
        for c in &self.claims {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Count, min, median, 90th percentile and max of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub p90: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let at =
            |q: f64| if v.is_empty() { f64::NAN } else { v[((v.len() - 1) as f64 * q).round() as usize] };
        Self { count: v.len(), min: at(0.0), median: at(0.5), p90: at(0.9), max: at(1.0) }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} min={:.3e} median={:.3e} p90={:.3e} max={:.3e}",
            self.count, self.min, self.median, self.p90, self.max
        )
    }
}

/// Runs every claim and returns the report; failing claims are data, not
/// errors.
pub fn run_verification(options: &VerifyOptions) -> Result<VerifyReport> {
    if options.instances == 0 {
        return Err(invalid("verification needs at least one instance"));
    }
    let grid = GridSpec::square(options.grid_n)?;
    let instances = sample_instances(options.instances, options.seed);

    let mut claims = vec![check_intersection(&instances)?, check_peak(&instances)?, check_omega(&instances)?];
    claims.push(check_printed_intersection()?);
    let joint = joint_outcomes(&instances, &grid)?;
    claims.extend(check_joint(&joint));
    Ok(VerifyReport { options: *options, claims, joint })
}

/// `θ1` against bisection on `F1 − F2`.
pub fn check_intersection(instances: &[Instance]) -> Result<ClaimOutcome> {
    let mut worst = 0.0f64;
    let mut missing = 0;
    for inst in instances {
        let inputs = BottleneckInputs::new(inst.omega, &inst.cfg, &inst.ch);
        let f1 = |t: f64| source_limited_rate(t, inputs.q_cap, &inst.cfg);
        let f2 = |t: f64| relay_limited_rate(t, inputs.g_gain, &inst.cfg);
        match bisect_intersection(f1, f2, 0.0, 1.0 - 1e-12) {
            Some(t) => worst = worst.max((theta_intersection(&inputs) - t).abs()),
            None => missing += 1,
        }
    }
    Ok(ClaimOutcome {
        name: "theta_intersection matches bisection",
        passed: missing == 0 && worst <= INTERSECTION_TOL,
        detail: format!("max |diff|={worst:.3e} (tol {INTERSECTION_TOL:e}), unbracketed={missing}"),
    })
}

/// `θ2` against golden-section maximization of `F2`.
pub fn check_peak(instances: &[Instance]) -> Result<ClaimOutcome> {
    let mut worst = 0.0f64;
    for inst in instances {
        let g = BottleneckInputs::new(inst.omega, &inst.cfg, &inst.ch).g_gain;
        let (t, _) = golden_section_max(|t| relay_limited_rate(t, g, &inst.cfg), 0.0, 1.0)?;
        worst = worst.max((theta_peak(g)? - t).abs());
    }
    Ok(ClaimOutcome {
        name: "theta_peak matches golden section",
        passed: worst <= PEAK_TOL,
        detail: format!("max |diff|={worst:.3e} (tol {PEAK_TOL:e})"),
    })
}

/// Closed-form `ω*` against a dense `ω` grid of the bottleneck at each
/// instance's `θ`.
pub fn check_omega(instances: &[Instance]) -> Result<ClaimOutcome> {
    let shortfalls: Vec<f64> = instances
        .par_iter()
        .map(|inst| -> Result<f64> {
            let g = |w: f64| equal_rate_bottleneck(inst.theta, w, &inst.cfg, &inst.ch);
            let n = OMEGA_GRID_POINTS;
            let grid_max = (0..=n).map(|i| g(i as f64 / n as f64)).fold(f64::NEG_INFINITY, f64::max);
            let omega = optimal_omega_given_theta(inst.theta, &inst.cfg, &inst.ch)?;
            Ok(grid_max - g(omega))
        })
        .collect::<Result<_>>()?;
    let failures = shortfalls.iter().filter(|s| **s > OMEGA_TOL).count();
    let worst = shortfalls.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ClaimOutcome {
        name: "optimal_omega_given_theta matches omega grid",
        passed: failures == 0,
        detail: format!("max shortfall={worst:.3e} (tol {OMEGA_TOL:e}), failures={failures}"),
    })
}

/// At `Q = 2, G = 1` the crossing is `θ = 1/2`; the alternative expression
/// `Q/(1 + 2G) = 2/3` does not equalize the two curves.
pub fn check_printed_intersection() -> Result<ClaimOutcome> {
    let cfg = SystemConfig::new(1.0, 1.0)?;
    let inputs = BottleneckInputs { q_cap: 2.0, g_gain: 1.0, s_sum: 4.0 };
    let gap = |t: f64| {
        (source_limited_rate(t, inputs.q_cap, &cfg) - relay_limited_rate(t, inputs.g_gain, &cfg)).abs()
    };
    let theta1 = theta_intersection(&inputs);
    let alt = inputs.q_cap / (1.0 + 2.0 * inputs.g_gain);
    let (at_theta1, at_alt) = (gap(theta1), gap(alt));
    Ok(ClaimOutcome {
        name: "intersection formula Q/(Q+2G) vs Q/(1+2G)",
        passed: at_theta1 <= DISCREPANCY_EQUAL_TOL && at_alt > DISCREPANCY_MIN_GAP,
        detail: format!(
            "Q=2 G=1: theta1={theta1} |F1-F2|={at_theta1:.3e}; Q/(1+2G)={alt:.6} |F1-F2|={at_alt:.6}"
        ),
    })
}

pub fn joint_outcomes(instances: &[Instance], grid: &GridSpec) -> Result<Vec<JointOutcome>> {
    instances
        .iter()
        .map(|inst| {
            let g = grid_search(&inst.cfg, &inst.ch, grid);
            let alt = alternating_optimize(&inst.cfg, &inst.ch)?;
            let exact = exact_theta_optimize(&inst.cfg, &inst.ch)?;
            Ok(JointOutcome {
                grid_max: g.best.r_sum,
                discretization_bound: g.discretization_bound,
                sum_cap_binding: g.sum_cap_binding,
                alternating: alt.r_sum,
                alternating_iterations: alt.iterations,
                exact: exact.r_sum,
            })
        })
        .collect()
}

/// Soundness of the alternating optimizer, its accuracy where the sum cap
/// is slack, and the exact method's accuracy where it binds.
pub fn check_joint(joint: &[JointOutcome]) -> Vec<ClaimOutcome> {
    let violations = joint.iter().filter(|j| j.alternating > j.grid_max + j.discretization_bound).count();
    let slack: Vec<&JointOutcome> = joint.iter().filter(|j| !j.sum_cap_binding).collect();
    let binding: Vec<&JointOutcome> = joint.iter().filter(|j| j.sum_cap_binding).collect();
    let slack_worst = slack.iter().map(|j| j.alternating_gap().abs()).fold(0.0, f64::max);
    let slack_fail = slack.iter().filter(|j| j.alternating_gap().abs() > JOINT_TOL).count();
    // exact may beat the grid by up to its discretization error
    let exact_worst = binding.iter().map(|j| j.exact_gap()).fold(f64::NEG_INFINITY, f64::max);
    let exact_fail = binding
        .iter()
        .filter(|j| j.exact_gap() > JOINT_TOL || j.exact > j.grid_max + j.discretization_bound)
        .count();
    vec![
        ClaimOutcome {
            name: "alternating never exceeds grid maximum + bound",
            passed: violations == 0,
            detail: format!("violations={violations} of {}", joint.len()),
        },
        ClaimOutcome {
            name: "alternating within 1e-3 of grid where sum cap is slack",
            passed: slack_fail == 0,
            detail: format!("failures={slack_fail} of {}, max |gap|={slack_worst:.3e}", slack.len()),
        },
        ClaimOutcome {
            name: "exact-theta within 1e-3 of grid where sum cap binds",
            passed: exact_fail == 0,
            detail: format!("failures={exact_fail} of {}, max grid-exact={exact_worst:.3e}", binding.len()),
        },
    ]
}
