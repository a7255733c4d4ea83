//! System quantities and the achievable rate region of the time-switching
//! two-way relay.
//!
//! A block of length `T` is split three ways: `θT` for the relay to harvest
//! energy from both sources, then `(1−θ)T/2` for the multi-access phase and
//! `(1−θ)T/2` for the broadcast phase. All harvested energy is spent in the
//! broadcast phase. Channel gains are channel-to-noise ratios with unit noise
//! power, so `H·P` is a linear SNR.

use crate::error::{domain, invalid, Result};

/// Channel-to-noise ratios of the two source–relay links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelState {
    h1: f64,
    h2: f64,
}

impl ChannelState {
    pub fn new(h1_cnr: f64, h2_cnr: f64) -> Result<Self> {
        for (name, h) in [("h1_cnr", h1_cnr), ("h2_cnr", h2_cnr)] {
            if !(h.is_finite() && h > 0.0) {
                return Err(invalid(format!("{name} must be finite and positive, got {h}")));
            }
        }
        let ch = Self { h1: h1_cnr, h2: h2_cnr };
        let beta = ch.beta();
        if !(beta.is_finite() && beta > 0.0) {
            return Err(invalid(format!("gain ratio h2/h1 = {beta} is not finite and positive")));
        }
        Ok(ch)
    }

    pub fn h1(&self) -> f64 {
        self.h1
    }

    pub fn h2(&self) -> f64 {
        self.h2
    }

    /// Gain ratio `H2 / H1`.
    pub fn beta(&self) -> f64 {
        self.h2 / self.h1
    }

    /// The weaker of the two links.
    pub fn min_gain(&self) -> f64 {
        self.h1.min(self.h2)
    }

    pub fn swapped(&self) -> Self {
        Self { h1: self.h2, h2: self.h1 }
    }
}

/// Power budget, harvesting efficiency and numeric settings shared by all
/// rate computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    p_tot: f64,
    eta: f64,
    block_time: f64,
    log_base: f64,
    ln_base: f64,
    epsilon: f64,
}

impl SystemConfig {
    pub const DEFAULT_BLOCK_TIME: f64 = 1.0;
    pub const DEFAULT_LOG_BASE: f64 = 2.0;
    pub const DEFAULT_EPSILON: f64 = 1e-9;

    /// Total power `p_tot` in watts and conversion efficiency `eta` in
    /// `(0, 1]`; block time 1, base-2 logarithms, tolerance 1e-9.
    pub fn new(p_tot: f64, eta: f64) -> Result<Self> {
        if !(p_tot.is_finite() && p_tot > 0.0) {
            return Err(invalid(format!("p_tot must be finite and positive, got {p_tot}")));
        }
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(invalid(format!("eta must lie in (0, 1], got {eta}")));
        }
        Ok(Self {
            p_tot,
            eta,
            block_time: Self::DEFAULT_BLOCK_TIME,
            log_base: Self::DEFAULT_LOG_BASE,
            ln_base: Self::DEFAULT_LOG_BASE.ln(),
            epsilon: Self::DEFAULT_EPSILON,
        })
    }

    pub fn with_block_time(mut self, block_time: f64) -> Result<Self> {
        if !(block_time.is_finite() && block_time > 0.0) {
            return Err(invalid(format!("block_time must be finite and positive, got {block_time}")));
        }
        self.block_time = block_time;
        Ok(self)
    }

    /// Base of every rate logarithm; `std::f64::consts::E` gives nats.
    pub fn with_log_base(mut self, log_base: f64) -> Result<Self> {
        if !(log_base.is_finite() && log_base > 1.0) {
            return Err(invalid(format!("log_base must be finite and > 1, got {log_base}")));
        }
        self.log_base = log_base;
        self.ln_base = log_base.ln();
        Ok(self)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(invalid(format!("epsilon must be finite and positive, got {epsilon}")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn p_tot(&self) -> f64 {
        self.p_tot
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn block_time(&self) -> f64 {
        self.block_time
    }

    pub fn log_base(&self) -> f64 {
        self.log_base
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `log(1 + x)` in the configured base, accurate for small `x`.
    pub fn log1p(&self, x: f64) -> f64 {
        x.ln_1p() / self.ln_base
    }
}

/// A time-switching factor `θ` and a power split `ω`, both strictly inside
/// `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyPoint {
    theta: f64,
    omega: f64,
}

impl PolicyPoint {
    pub fn new(theta: f64, omega: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(domain(format!("theta must lie in (0, 1), got {theta}")));
        }
        if !(omega > 0.0 && omega < 1.0) {
            return Err(domain(format!("omega must lie in (0, 1), got {omega}")));
        }
        Ok(Self { theta, omega })
    }

    /// Builds a policy after pulling both factors into the open unit interval.
    pub fn clamped(theta: f64, omega: f64) -> Self {
        Self { theta: clamp_open(theta), omega: clamp_open(omega) }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn powers(&self, p_tot: f64) -> SourcePowers {
        SourcePowers::split(p_tot, self.omega)
    }
}

/// Smallest step away from 0 and 1 used when a factor must stay interior.
pub(crate) const OPEN_MARGIN: f64 = f64::EPSILON;

pub(crate) fn clamp_open(x: f64) -> f64 {
    if x.is_nan() {
        return 0.5;
    }
    x.clamp(OPEN_MARGIN, 1.0 - OPEN_MARGIN)
}

/// Transmit powers of the two sources.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePowers {
    pub p1: f64,
    pub p2: f64,
}

impl SourcePowers {
    /// `P1 = p_tot·ω`, `P2 = p_tot − P1`.
    pub fn split(p_tot: f64, omega: f64) -> Self {
        let p1 = p_tot * omega;
        Self { p1, p2: p_tot - p1 }
    }

    /// Received signal power at the relay, `P1·H1 + P2·H2`.
    pub fn received(&self, ch: &ChannelState) -> f64 {
        self.p1 * ch.h1() + self.p2 * ch.h2()
    }
}

/// The three caps of the achievable rate region at one policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRegionBounds {
    pub r1_cap: f64,
    pub r2_cap: f64,
    pub sum_cap: f64,
}

impl RateRegionBounds {
    /// Largest `R1 + R2` with `R1 = R2` inside the region.
    pub fn fair_sum(&self) -> f64 {
        2.0 * self.r1_cap.min(self.r2_cap).min(0.5 * self.sum_cap)
    }

    pub fn fair_pair(&self) -> RatePair {
        let r = 0.5 * self.fair_sum();
        RatePair { r1: r, r2: r }
    }

    pub fn contains(&self, rates: &RatePair) -> bool {
        rates.r1 >= 0.0
            && rates.r2 >= 0.0
            && rates.r1 <= self.r1_cap
            && rates.r2 <= self.r2_cap
            && rates.r1 + rates.r2 <= self.sum_cap
    }

    /// Whether the multi-access sum constraint is the tightest of the three
    /// for equal rates.
    pub fn sum_cap_binding(&self) -> bool {
        0.5 * self.sum_cap < self.r1_cap.min(self.r2_cap)
    }
}

/// Per-direction rates, `r1` from S1 to S2 and `r2` from S2 to S1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

/// `½·log(1 + x)`.
pub fn half_capacity(x: f64, log_base: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain(format!("capacity argument must be nonnegative, got {x}")));
    }
    if !(log_base.is_finite() && log_base > 1.0) {
        return Err(domain(format!("log base must be finite and > 1, got {log_base}")));
    }
    Ok(0.5 * x.ln_1p() / log_base.ln())
}

/// Energy collected at the relay during the harvesting slot, in joules.
pub fn harvested_energy(
    theta: f64,
    powers: SourcePowers,
    ch: &ChannelState,
    cfg: &SystemConfig,
) -> Result<f64> {
    if !(0.0..1.0).contains(&theta) {
        return Err(domain(format!("theta must lie in [0, 1), got {theta}")));
    }
    Ok(cfg.eta() * powers.received(ch) * theta * cfg.block_time())
}

/// Average relay transmit power over the broadcast slot, in watts.
pub fn relay_power(theta: f64, powers: SourcePowers, ch: &ChannelState, cfg: &SystemConfig) -> Result<f64> {
    if !(0.0..1.0).contains(&theta) {
        return Err(domain(format!("relay power needs theta in [0, 1), got {theta}")));
    }
    Ok(relay_power_factor(theta, cfg.eta()) * powers.received(ch))
}

/// `2ηθ / (1 − θ)`: relay power per unit of received source power.
pub(crate) fn relay_power_factor(theta: f64, eta: f64) -> f64 {
    2.0 * eta * theta / (1.0 - theta)
}

pub fn rate_region_bounds(policy: &PolicyPoint, cfg: &SystemConfig, ch: &ChannelState) -> RateRegionBounds {
    let theta = policy.theta();
    let powers = policy.powers(cfg.p_tot());
    let prefactor = 0.5 * (1.0 - theta) * cfg.block_time();
    let p_relay = relay_power_factor(theta, cfg.eta()) * powers.received(ch);

    // log is monotone, so the min is taken on the SNRs
    let snr1 = (ch.h1() * powers.p1).min(ch.h2() * p_relay);
    let snr2 = (ch.h2() * powers.p2).min(ch.h1() * p_relay);
    let snr_sum = ch.h1() * powers.p1 + ch.h2() * powers.p2;

    RateRegionBounds {
        r1_cap: prefactor * cfg.log1p(snr1),
        r2_cap: prefactor * cfg.log1p(snr2),
        sum_cap: prefactor * cfg.log1p(snr_sum),
    }
}

/// Sum rate `R1 + R2` achievable under equal rates at `policy`.
pub fn fair_sum_rate(policy: &PolicyPoint, cfg: &SystemConfig, ch: &ChannelState) -> f64 {
    rate_region_bounds(policy, cfg, ch).fair_sum()
}
