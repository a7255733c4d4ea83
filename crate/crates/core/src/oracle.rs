//! Brute-force references for the closed forms: a full `(θ, ω)` lattice
//! search, bisection for curve crossings and golden-section search for
//! unimodal maxima. Nothing here calls into [`crate::solver`]'s closed forms.

use rayon::prelude::*;

use crate::error::{domain, invalid, Result};
use crate::model::{fair_sum_rate, rate_region_bounds, ChannelState, PolicyPoint, SystemConfig};
use crate::solver::{Method, OptimizationResult};

/// Lattice resolution for [`grid_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_omega: usize,
    /// Distance kept from 0 and 1 on both axes.
    pub margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n_theta: 2001, n_omega: 2001, margin: 1e-6 }
    }
}

impl GridSpec {
    pub fn new(n_theta: usize, n_omega: usize, margin: f64) -> Result<Self> {
        if n_theta < 3 || n_omega < 3 {
            return Err(invalid(format!("grid needs at least 3 points per axis, got {n_theta}x{n_omega}")));
        }
        if !(margin > 0.0 && margin < 0.5) {
            return Err(invalid(format!("grid margin must lie in (0, 0.5), got {margin}")));
        }
        Ok(Self { n_theta, n_omega, margin })
    }

    /// Square lattice with the default margin.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n, Self::default().margin)
    }

    pub fn theta_at(&self, i: usize) -> f64 {
        node(self.margin, self.n_theta, i)
    }

    pub fn omega_at(&self, j: usize) -> f64 {
        node(self.margin, self.n_omega, j)
    }

    pub fn theta_step(&self) -> f64 {
        (1.0 - 2.0 * self.margin) / (self.n_theta - 1) as f64
    }

    pub fn omega_step(&self) -> f64 {
        (1.0 - 2.0 * self.margin) / (self.n_omega - 1) as f64
    }
}

fn node(margin: f64, n: usize, i: usize) -> f64 {
    if i == n - 1 {
        return 1.0 - margin;
    }
    margin + i as f64 * (1.0 - 2.0 * margin) / (n - 1) as f64
}

/// Lattice maximum with its discretization bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSearch {
    pub best: OptimizationResult,
    /// Upper bound on how far the continuous maximum can exceed
    /// `best.r_sum`: the largest one-step change of the objective along each
    /// axis near the lattice argmax, summed over both axes.
    pub discretization_bound: f64,
    /// Whether the multi-access sum cap is the active constraint at the
    /// lattice argmax.
    pub sum_cap_binding: bool,
}

/// Evaluates the fair sum rate on every lattice node. Ties go to the
/// smallest `θ`, then the smallest `ω`; rows may be evaluated in parallel,
/// the reduction is sequential in row order.
pub fn grid_search(cfg: &SystemConfig, ch: &ChannelState, grid: &GridSpec) -> GridSearch {
    let eval = |i: usize, j: usize| {
        fair_sum_rate(&PolicyPoint::clamped(grid.theta_at(i), grid.omega_at(j)), cfg, ch)
    };

    let row_best: Vec<(usize, f64)> = (0..grid.n_theta)
        .into_par_iter()
        .map(|i| {
            let mut best = (0, f64::NEG_INFINITY);
            for j in 0..grid.n_omega {
                let v = eval(i, j);
                if v > best.1 {
                    best = (j, v);
                }
            }
            best
        })
        .collect();

    let (mut bi, mut bj, mut bv) = (0, 0, f64::NEG_INFINITY);
    for (i, &(j, v)) in row_best.iter().enumerate() {
        if v > bv {
            (bi, bj, bv) = (i, j, v);
        }
    }

    let reach = 2;
    let i_range = bi.saturating_sub(reach)..=(bi + reach).min(grid.n_theta - 1);
    let j_range = bj.saturating_sub(reach)..=(bj + reach).min(grid.n_omega - 1);
    let (mut d_theta, mut d_omega) = (0.0f64, 0.0f64);
    for i in i_range.clone() {
        for j in j_range.clone() {
            let v = eval(i, j);
            if i + 1 < grid.n_theta {
                d_theta = d_theta.max((eval(i + 1, j) - v).abs());
            }
            if j + 1 < grid.n_omega {
                d_omega = d_omega.max((eval(i, j + 1) - v).abs());
            }
        }
    }

    let policy = PolicyPoint::clamped(grid.theta_at(bi), grid.omega_at(bj));
    GridSearch {
        best: OptimizationResult {
            policy,
            r_sum: bv,
            iterations: grid.n_theta * grid.n_omega,
            converged: true,
            method: Method::Grid,
            trace: Vec::new(),
        },
        discretization_bound: d_theta + d_omega,
        sum_cap_binding: rate_region_bounds(&policy, cfg, ch).sum_cap_binding(),
    }
}

/// Crossing of a falling curve `f` and a rising-then-falling curve `g` on
/// `[lo, hi]`, by bisection on the sign of `f − g` until the bracket cannot
/// shrink further.
///
/// Returns `None` when `f − g` does not change sign from positive to
/// nonpositive across the interval.
pub fn bisect_intersection<F, G>(f: F, g: G, lo: f64, hi: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let diff = |x: f64| f(x) - g(x);
    if !(lo < hi) || !(diff(lo) > 0.0) || !(diff(hi) <= 0.0) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..2100 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let d = diff(mid);
        if d == 0.0 {
            return Some(mid);
        }
        if d > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(if diff(a).abs() <= diff(b).abs() { a } else { b })
}

/// Maximum of a unimodal `f` on `[lo, hi]`, returned as `(x*, f(x*))`.
///
/// Golden-section search brackets the maximizer until the bracket stops
/// shrinking. Comparisons of nearly equal values limit that stage to about
/// `sqrt(ε)` in `x` around a smooth peak, so it is followed by one
/// symmetric three-point parabola vertex, Richardson-extrapolated over
/// widths `w` and `2w` to cancel the `O(w²)` asymmetry bias. The refined
/// point is kept only if it stays within `w` of the bracket and does not
/// lower `f`, which leaves kinked maxima at the bracketed point.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(domain(format!("golden_section_max needs lo < hi, got [{lo}, {hi}]")));
    }

    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if b - a <= 4.0 * f64::EPSILON * c.abs().max(1.0) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);

    let vertex = |w: f64| -> Option<f64> {
        let (fp, fm) = (f(x + w), f(x - w));
        let curvature = fp - 2.0 * fx + fm;
        (curvature < 0.0).then(|| x - w * (fp - fm) / (2.0 * curvature))
    };
    for scale in [1e-3, 1e-4, 1e-5] {
        let w = scale * (hi - lo);
        if x - 2.0 * w < lo || x + 2.0 * w > hi {
            continue;
        }
        if let (Some(v1), Some(v2)) = (vertex(w), vertex(2.0 * w)) {
            let refined = (4.0 * v1 - v2) / 3.0;
            let fr = f(refined);
            if (refined - x).abs() <= w && fr >= fx - 64.0 * f64::EPSILON * fx.abs() {
                return Ok((refined, fr));
            }
        }
        break;
    }
    Ok((x, fx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: f64, eta: f64) -> SystemConfig {
        SystemConfig::new(p, eta).unwrap()
    }

    fn ch(h1: f64, h2: f64) -> ChannelState {
        ChannelState::new(h1, h2).unwrap()
    }

    fn f2(g: f64) -> impl Fn(f64) -> f64 {
        move |t: f64| 0.5 * (1.0 - t) * (2.0 * g * t / (1.0 - t)).ln_1p()
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(2, 10, 1e-6).is_err());
        assert!(GridSpec::new(10, 10, 0.5).is_err());
        assert!(GridSpec::new(10, 10, 0.0).is_err());
        let g = GridSpec::default();
        assert_eq!(g.theta_at(0), 1e-6);
        assert_eq!(g.theta_at(2000), 1.0 - 1e-6);
    }

    #[test]
    fn grid_zero_power() {
        let g = GridSpec::square(51).unwrap();
        let r = grid_search(&cfg(1e-300, 1.0), &ch(1.0, 1.0), &g);
        assert!(r.best.r_sum < 1e-299);
    }

    #[test]
    fn grid_symmetric_instance() {
        let g = GridSpec::square(401).unwrap();
        let r = grid_search(&cfg(2.0, 1.0), &ch(1.0, 1.0), &g);
        // flat ridge in omega; value from a 20000-point theta scan per omega
        assert!((r.best.r_sum - 0.669_882_278_897_434_8).abs() <= r.discretization_bound);
        let p = r.best.policy;
        let mirrored =
            fair_sum_rate(&PolicyPoint::clamped(p.theta(), 1.0 - p.omega()), &cfg(2.0, 1.0), &ch(1.0, 1.0));
        assert!((mirrored - r.best.r_sum).abs() <= 1e-12);
        assert_eq!(r.best.method, Method::Grid);
    }

    #[test]
    fn grid_is_deterministic() {
        let g = GridSpec::square(301).unwrap();
        let a = grid_search(&cfg(1.0, 0.7), &ch(1.0, 4.0), &g);
        let b = grid_search(&cfg(1.0, 0.7), &ch(1.0, 4.0), &g);
        assert_eq!(a, b);
    }

    #[test]
    fn grid_independent_of_thread_count() {
        let g = GridSpec::square(301).unwrap();
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| grid_search(&cfg(2.0, 0.6), &ch(0.5, 3.0), &g))
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn grid_refinement_within_bound() {
        let c = cfg(1.0, 0.8);
        let h = ch(1.0, 10.0);
        let coarse = grid_search(&c, &h, &GridSpec::square(201).unwrap());
        let fine = grid_search(&c, &h, &GridSpec::square(401).unwrap());
        assert!(fine.best.r_sum >= coarse.best.r_sum - 1e-15);
        assert!(fine.best.r_sum - coarse.best.r_sum <= coarse.discretization_bound);
    }

    #[test]
    fn bisect_synthetic_pair() {
        let x = bisect_intersection(|t| 1.0 - t, |t| 3.0 * t, 0.0, 1.0).unwrap();
        assert!((x - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bisect_relay_curves() {
        for (q, g, expected) in [(2.0f64, 1.0, 0.5), (1.0, 1.0, 1.0 / 3.0)] {
            let f1 = move |t: f64| 0.5 * (1.0 - t) * q.ln_1p();
            let x = bisect_intersection(f1, f2(g), 0.0, 1.0 - 1e-12).unwrap();
            assert!((x - expected).abs() < 1e-12, "Q={q} G={g}: {x}");
        }
    }

    #[test]
    fn bisect_reports_missing_crossing() {
        // crossing at 0.5 lies beyond the searched interval
        assert!(bisect_intersection(|t| 1.0 - t, |t| t, 0.0, 0.4).is_none());
        assert!(bisect_intersection(|t| t, |t| 1.0 - t, 0.0, 1.0).is_none());
    }

    #[test]
    fn golden_quadratic() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0).unwrap();
        assert!((x - 0.3).abs() <= 1e-10);
        assert!(fx.abs() < 1e-20);
    }

    #[test]
    fn golden_relay_peak() {
        // roots of dF2/dθ from mpmath
        for (g, expected) in [(1.0, 0.564_376_588_560_399_8), (0.5, 0.632_120_558_828_557_7)] {
            let (x, _) = golden_section_max(f2(g), 1e-12, 1.0 - 1e-12).unwrap();
            assert!((x - expected).abs() <= 1e-10, "G={g}: {x}");
        }
    }

    #[test]
    fn golden_kinked_peak() {
        let (x, _) = golden_section_max(|x| -(x - 0.7).abs(), 0.0, 1.0).unwrap();
        assert!((x - 0.7).abs() <= 1e-12);
    }

    #[test]
    fn golden_rejects_empty_interval() {
        assert!(golden_section_max(|x| x, 1.0, 1.0).is_err());
        assert!(golden_section_max(|x| x, 1.0, 0.0).is_err());
    }
}
