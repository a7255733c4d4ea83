use rayon::prelude::*;

use crate::baseline::{non_eh_msr, relative_gain};
use crate::error::{invalid, Error, Result};
use crate::model::{ChannelState, SystemConfig};
use crate::oracle::GridSpec;
use crate::solver::{optimize, Method};

/// A `β × P_tot` grid at fixed `H1` and efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub h1: f64,
    pub beta_db_min: f64,
    pub beta_db_max: f64,
    pub beta_steps: usize,
    pub ptot_dbw_min: f64,
    pub ptot_dbw_max: f64,
    pub ptot_steps: usize,
    pub eta: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            h1: 1.0,
            beta_db_min: -10.0,
            beta_db_max: 10.0,
            beta_steps: 21,
            ptot_dbw_min: -10.0,
            ptot_dbw_max: 10.0,
            ptot_steps: 21,
            eta: 1.0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.h1.is_finite() && self.h1 > 0.0) {
            return Err(invalid(format!("h1 must be finite and positive, got {}", self.h1)));
        }
        for (name, lo, hi, steps) in [
            ("beta_db", self.beta_db_min, self.beta_db_max, self.beta_steps),
            ("ptot_dbw", self.ptot_dbw_min, self.ptot_dbw_max, self.ptot_steps),
        ] {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(invalid(format!("{name} bounds must be finite")));
            }
            if lo > hi {
                return Err(invalid(format!("{name} min {lo} exceeds max {hi}")));
            }
            if steps == 0 {
                return Err(invalid(format!("{name} needs at least one step")));
            }
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(invalid(format!("eta must lie in (0, 1], got {}", self.eta)));
        }
        Ok(())
    }

    pub fn beta_values(&self) -> Vec<f64> {
        linspace(self.beta_db_min, self.beta_db_max, self.beta_steps)
    }

    pub fn ptot_values(&self) -> Vec<f64> {
        linspace(self.ptot_dbw_min, self.ptot_dbw_max, self.ptot_steps)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + i as f64 * step }).collect()
}

/// One sweep cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub beta_db: f64,
    pub ptot_dbw: f64,
    pub eta: f64,
    pub theta_star: f64,
    pub omega_star: f64,
    pub r_sum_ts: f64,
    pub r_sum_non_eh: f64,
    pub gain_ts_vs_non_eh: f64,
    /// False when the solver hit its iteration cap on this cell.
    pub converged: bool,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Channel pair with `H2 = h1 · 10^(β_dB/10)`.
pub fn cnr_from_beta(h1: f64, beta_db: f64) -> Result<ChannelState> {
    ChannelState::new(h1, h1 * db_to_linear(beta_db))
}

/// Solves every cell, `β` outer and `P_tot` inner. Cells run in parallel;
/// the output order does not depend on scheduling. A cell whose solver
/// fails to converge yields a row with `converged = false` and NaN solver
/// outputs; the sweep continues.
pub fn run_sweep(spec: &SweepSpec, method: Method, grid: &GridSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let cells: Vec<(f64, f64)> = spec
        .beta_values()
        .into_iter()
        .flat_map(|b| spec.ptot_values().into_iter().map(move |p| (b, p)))
        .collect();

    cells
        .into_par_iter()
        .map(|(beta_db, ptot_dbw)| {
            let ch = cnr_from_beta(spec.h1, beta_db)?;
            let cfg = SystemConfig::new(db_to_linear(ptot_dbw), spec.eta)?;
            let r_non_eh = non_eh_msr(&cfg, &ch);
            let result = match optimize(&cfg, &ch, method, grid) {
                Ok(r) => r,
                Err(Error::Convergence { .. }) => {
                    return Ok(SweepRow {
                        beta_db,
                        ptot_dbw,
                        eta: spec.eta,
                        theta_star: f64::NAN,
                        omega_star: f64::NAN,
                        r_sum_ts: f64::NAN,
                        r_sum_non_eh: r_non_eh,
                        gain_ts_vs_non_eh: f64::NAN,
                        converged: false,
                    })
                }
                Err(e) => return Err(e),
            };
            Ok(SweepRow {
                beta_db,
                ptot_dbw,
                eta: spec.eta,
                theta_star: result.policy.theta(),
                omega_star: result.policy.omega(),
                r_sum_ts: result.r_sum,
                r_sum_non_eh: r_non_eh,
                gain_ts_vs_non_eh: relative_gain(result.r_sum, r_non_eh)?,
                converged: result.converged,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::alternating_optimize;

    #[test]
    fn beta_conversion() {
        assert_eq!(cnr_from_beta(1.0, 0.0).unwrap().h2(), 1.0);
        assert!((cnr_from_beta(1.0, 10.0).unwrap().h2() - 10.0).abs() < 1e-14);
        assert!((cnr_from_beta(1.0, -10.0).unwrap().h2() - 0.1).abs() < 1e-15);
        assert!(cnr_from_beta(0.0, 0.0).is_err());
    }

    #[test]
    fn default_axes() {
        let s = SweepSpec::default();
        let b = s.beta_values();
        assert_eq!(b.len(), 21);
        assert_eq!((b[0], b[10], b[20]), (-10.0, 0.0, 10.0));
        assert_eq!(s.ptot_values(), b);
    }

    #[test]
    fn single_cell_matches_optimizer() {
        let spec = SweepSpec {
            beta_db_min: 0.0,
            beta_db_max: 0.0,
            beta_steps: 1,
            ptot_dbw_min: 0.0,
            ptot_dbw_max: 0.0,
            ptot_steps: 1,
            ..SweepSpec::default()
        };
        let rows = run_sweep(&spec, Method::Alternating, &GridSpec::default()).unwrap();
        assert_eq!(rows.len(), 1);
        let direct = alternating_optimize(
            &SystemConfig::new(1.0, 1.0).unwrap(),
            &ChannelState::new(1.0, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(rows[0].r_sum_ts, direct.r_sum);
        assert_eq!(rows[0].omega_star, 0.5);
        assert_eq!(rows[0].gain_ts_vs_non_eh, relative_gain(rows[0].r_sum_ts, rows[0].r_sum_non_eh).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        let flipped = SweepSpec { beta_db_min: 5.0, beta_db_max: -5.0, ..SweepSpec::default() };
        assert!(run_sweep(&flipped, Method::Alternating, &GridSpec::default()).is_err());
        let empty = SweepSpec { ptot_steps: 0, ..SweepSpec::default() };
        assert!(empty.validate().is_err());
        let eta = SweepSpec { eta: 0.0, ..SweepSpec::default() };
        assert!(eta.validate().is_err());
    }
}
