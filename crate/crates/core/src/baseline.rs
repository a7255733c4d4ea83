//! The conventional two-way relay without energy harvesting, used as the
//! benchmark, and the relative gain between two schemes.
//!
//! With the total power shared optimally among both sources and a
//! battery-powered relay, the equal-rate sum rate is `log(1 + 2·P_tot/V)`
//! with `V = 1/H1 + 1/H2 + max{1/H1, 1/H2}`.

use crate::error::{domain, Result};
use crate::model::{ChannelState, SystemConfig};

/// Rates of two schemes and the gain of the first over the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainReport {
    pub r_a: f64,
    pub r_b: f64,
    pub gain: f64,
}

impl GainReport {
    pub fn new(r_a: f64, r_b: f64) -> Result<Self> {
        Ok(Self { r_a, r_b, gain: relative_gain(r_a, r_b)? })
    }
}

/// Effective inverse gain `V` of the non-harvesting relay.
pub fn inverse_gain_sum(ch: &ChannelState) -> f64 {
    let (a, b) = (1.0 / ch.h1(), 1.0 / ch.h2());
    a + b + a.max(b)
}

/// Maximum equal-rate sum rate of the non-harvesting relay.
pub fn non_eh_msr(cfg: &SystemConfig, ch: &ChannelState) -> f64 {
    cfg.block_time() * cfg.log1p(2.0 * cfg.p_tot() / inverse_gain_sum(ch))
}

/// `(r_a − r_b) / r_b`; positive when scheme A delivers more.
pub fn relative_gain(r_a: f64, r_b: f64) -> Result<f64> {
    if !(r_b > 0.0) {
        return Err(domain(format!("relative gain needs a positive reference rate, got {r_b}")));
    }
    Ok((r_a - r_b) / r_b)
}
