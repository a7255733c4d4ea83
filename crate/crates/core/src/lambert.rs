//! Principal branch `W0` of the Lambert W function on the reals.
//!
//! `W0(x)` is the solution `w ≥ −1` of `w·e^w = x`, defined for
//! `x ≥ −1/e`. The initial guess comes from the branch-point series in
//! `p = sqrt(2(e·x + 1))` near `−1/e`, from `ln(1 + x)` for moderate
//! arguments and from the asymptotic expansion `L1 − L2 + L2/L1` for large
//! ones. Halley's iteration then refines `w·e^w − x` for `w ≤ 1`; above that
//! the equivalent `w + ln w − ln x` is refined instead so `e^w` cannot
//! overflow.

use std::f64::consts::E;

use crate::error::{domain, Error, Result};

const MAX_ITERATIONS: usize = 100;

/// `1/e` rounded to nearest.
pub const INV_E: f64 = 0.367_879_441_171_442_33;

// e split into a double plus a correction, for e·x + 1 near the branch point
const E_HI: f64 = E;
const E_LO: f64 = 1.445_646_891_729_250_2e-16;

/// A solved `W0` together with its defining residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WEvaluation {
    pub argument: f64,
    pub value: f64,
    /// `|value·e^value − argument|`
    pub residual: f64,
}

/// Principal-branch Lambert W.
pub fn lambert_w0(x: f64) -> Result<f64> {
    lambert_w0_eval(x).map(|e| e.value)
}

pub fn lambert_w0_eval(x: f64) -> Result<WEvaluation> {
    if x.is_nan() || x < -INV_E {
        return Err(domain(format!("lambert_w0 is undefined below -1/e, got {x}")));
    }
    if x == f64::INFINITY {
        return Err(domain("lambert_w0 of +inf"));
    }
    let value = solve(x)?;
    Ok(WEvaluation { argument: x, value, residual: (value * value.exp() - x).abs() })
}

fn solve(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    // distance from the branch point, e·x + 1, with e carried in two parts
    let q = E_HI.mul_add(x, 1.0) + E_LO * x;
    if q <= 0.0 {
        return Ok(-1.0);
    }
    if q < 1e-6 {
        // close to the branch point the derivative of w·e^w vanishes;
        // the series alone is accurate to ~p^7 here
        let p = (2.0 * q).sqrt();
        let w = branch_series(p);
        return Ok(w.max(-1.0));
    }

    let mut w = initial_guess(x, q);
    if w <= 1.0 {
        for _ in 0..MAX_ITERATIONS {
            let ew = w.exp();
            let f = w.mul_add(ew, -x);
            // near the branch point rounding in f moves the step by more
            // than the step tolerance; stop once f is at its rounding floor
            if f.abs() <= 4.0 * f64::EPSILON * x.abs() {
                return Ok(w);
            }
            let wp1 = w + 1.0;
            let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
            let next = w - step;
            if !next.is_finite() {
                break;
            }
            if (next - w).abs() <= 8.0 * f64::EPSILON * next.abs().max(1.0) {
                return Ok(next);
            }
            w = next;
        }
    } else {
        let ln_x = x.ln();
        for _ in 0..MAX_ITERATIONS {
            // g(w) = w + ln w − ln x, g' = 1 + 1/w, g'' = −1/w²
            let g = w + w.ln() - ln_x;
            let g1 = 1.0 + 1.0 / w;
            let g2 = -1.0 / (w * w);
            let step = g / (g1 - 0.5 * g * g2 / g1);
            let next = w - step;
            if (next - w).abs() <= 4.0 * f64::EPSILON * next.abs() {
                return Ok(next);
            }
            w = next;
        }
    }
    Err(Error::Convergence { routine: "lambert_w0", iterations: MAX_ITERATIONS })
}

/// Series of `W0` about the branch point in `p = sqrt(2(e·x + 1))`.
fn branch_series(p: f64) -> f64 {
    const C: [f64; 7] = [-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0, -221.0 / 8505.0];
    C.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}

fn initial_guess(x: f64, q: f64) -> f64 {
    if q < 0.5 {
        branch_series((2.0 * q).sqrt())
    } else if x < 3.0 {
        // W0(x) ≈ ln(1+x) · (1 − ln(1+ln(1+x)) / (2+ln(1+x)))
        let l = x.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}
