//! Grid search pinned against an independent vectorized evaluation of the
//! same lattice (H1 = 1, H2 = 10, P_tot = 1 W, η = 1, 2001 x 2001).

use tstwr_core::{grid_search, ChannelState, GridSpec, SystemConfig};

const ARGMAX: (usize, usize) = (298, 1687);
const GRID_MAX: f64 = 0.750_899_771_003_236_1;
/// Maximum of a 4001 x 4001 scan of width 4e-3 around the argmax.
const FINE_MAX: f64 = 0.751_038_621_336_105_3;

#[test]
fn pinned_grid_maximum() {
    let grid = GridSpec::default();
    let cfg = SystemConfig::new(1.0, 1.0).unwrap();
    let ch = ChannelState::new(1.0, 10.0).unwrap();
    let r = grid_search(&cfg, &ch, &grid);

    assert!((r.best.r_sum - GRID_MAX).abs() <= 1e-12, "{}", r.best.r_sum);
    assert_eq!(r.best.policy.theta(), grid.theta_at(ARGMAX.0));
    assert_eq!(r.best.policy.omega(), grid.omega_at(ARGMAX.1));
    assert!(FINE_MAX - r.best.r_sum <= r.discretization_bound, "bound {}", r.discretization_bound);
    assert!(!r.sum_cap_binding);
}

#[test]
fn refinement_stays_within_bound() {
    let cfg = SystemConfig::new(1.0, 1.0).unwrap();
    let ch = ChannelState::new(1.0, 10.0).unwrap();
    let coarse = grid_search(&cfg, &ch, &GridSpec::square(251).unwrap());
    let fine = grid_search(&cfg, &ch, &GridSpec::square(501).unwrap());
    assert!((fine.best.r_sum - coarse.best.r_sum).abs() <= coarse.discretization_bound);
}
