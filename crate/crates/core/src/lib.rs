//! Sum-rate optimization for a decode-and-forward two-way relay whose relay
//! powers itself by time-switching energy harvesting.
//!
//! Two sources exchange equal-rate traffic through a relay. A fraction `θ`
//! of each block is spent harvesting energy at the relay, the remainder is
//! split between a multi-access phase and a broadcast phase. The sources
//! share a total power budget through the split factor `ω`. The crate
//! provides:
//!
//! - [`model`]: the achievable rate region and the fair sum-rate objective,
//! - [`lambert`]: the principal branch of the Lambert W function,
//! - [`solver`]: closed-form per-coordinate optima and the alternating
//!   optimizer, plus an exact-θ refinement that accounts for the
//!   multi-access sum constraint,
//! - [`oracle`]: brute-force references (lattice search, bisection,
//!   golden-section search) used to certify the closed forms,
//! - [`baseline`]: the conventional non-harvesting relay benchmark,
//! - [`experiments`]: parameter sweeps, CSV and SVG output, and the
//!   solver-versus-oracle verification run behind the `tstwr` CLI.
//!
//! ```
//! use tstwr_core::{alternating_optimize, non_eh_msr, ChannelState, SystemConfig};
//!
//! let cfg = SystemConfig::new(1.0, 1.0)?;
//! let ch = ChannelState::new(1.0, 1.0)?;
//! let r = alternating_optimize(&cfg, &ch)?;
//! assert_eq!(r.policy.omega(), 0.5);
//! assert!(r.r_sum <= non_eh_msr(&cfg, &ch));
//! # Ok::<(), tstwr_core::Error>(())
//! ```

// `!(x > 0.0)` guards are written to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baseline;
pub mod error;
pub mod experiments;
pub mod lambert;
pub mod model;
pub mod oracle;
pub mod solver;

pub use baseline::{non_eh_msr, relative_gain, GainReport};
pub use error::{Error, Result};
pub use lambert::{lambert_w0, lambert_w0_eval, WEvaluation};
pub use model::{
    fair_sum_rate, half_capacity, harvested_energy, rate_region_bounds, relay_power, ChannelState,
    PolicyPoint, RatePair, RateRegionBounds, SourcePowers, SystemConfig,
};
pub use oracle::{bisect_intersection, golden_section_max, grid_search, GridSearch, GridSpec};
pub use solver::{
    alternating_optimize, equal_rate_bottleneck, exact_theta_optimize, optimal_omega_given_theta, optimize,
    relay_limited_rate, source_limited_rate, sum_rate_given_omega, sum_rate_given_omega_exact,
    theta_intersection, theta_peak, BottleneckInputs, Method, OptimizationResult, ThetaChoice,
};
