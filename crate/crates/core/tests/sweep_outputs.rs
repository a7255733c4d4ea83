use tstwr_core::experiments::{
    parse_csv, run_sweep, svg_document, to_csv_string, Chart, SweepRow, SweepSpec,
};
use tstwr_core::{optimize, relative_gain, GridSpec, Method, SystemConfig};

fn line_spec() -> SweepSpec {
    SweepSpec { ptot_dbw_min: 10.0, ptot_dbw_max: 10.0, ptot_steps: 1, ..SweepSpec::default() }
}

fn sweep(spec: &SweepSpec) -> Vec<SweepRow> {
    run_sweep(spec, Method::Alternating, &GridSpec::default()).unwrap()
}

/// `(x, y)` pairs of every polyline with the given class.
fn polylines(svg: &str, class: &str) -> Vec<Vec<(f64, f64)>> {
    let marker = format!("<polyline class=\"{class}\"");
    svg.lines()
        .filter(|l| l.starts_with(&marker))
        .map(|l| {
            let pts = l.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
            pts.split(' ')
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect()
        })
        .collect()
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
        ..Default::default()
    };
    let rows = sweep(&spec);
    assert_eq!(rows.len(), 1);
    let cfg = SystemConfig::new(1.0, 1.0).unwrap();
    let ch = tstwr_core::ChannelState::new(1.0, 1.0).unwrap();
    let r = optimize(&cfg, &ch, Method::Alternating, &GridSpec::default()).unwrap();
    assert_eq!(rows[0].r_sum_ts, r.r_sum);
    assert_eq!(rows[0].omega_star, 0.5);
}

#[test]
fn default_sweep_rows_and_gains() {
    let rows = sweep(&SweepSpec::default());
    assert_eq!(rows.len(), 441);
    assert_eq!((rows[0].beta_db, rows[0].ptot_dbw), (-10.0, -10.0));
    assert_eq!((rows[1].beta_db, rows[1].ptot_dbw), (-10.0, -9.0));
    assert_eq!((rows[440].beta_db, rows[440].ptot_dbw), (10.0, 10.0));
    for r in &rows {
        assert!(r.converged);
        assert!(r.r_sum_ts >= 0.0);
        assert!(r.gain_ts_vs_non_eh <= 0.0);
        assert_eq!(r.gain_ts_vs_non_eh, relative_gain(r.r_sum_ts, r.r_sum_non_eh).unwrap());
    }
}

#[test]
fn rate_nondecreasing_in_beta_at_high_power() {
    let rows = sweep(&line_spec());
    assert_eq!(rows.len(), 21);
    for w in rows.windows(2) {
        assert!(w[1].r_sum_ts - w[0].r_sum_ts >= -1e-9, "{} -> {}", w[0].beta_db, w[1].beta_db);
    }
}

#[test]
fn msr_vs_beta_chart_shows_dominance() {
    let rows = sweep(&line_spec());
    let svg = svg_document(&rows, Chart::MsrVsBeta).unwrap();
    let ts = polylines(&svg, "ts");
    let non_eh = polylines(&svg, "non-eh");
    assert_eq!((ts.len(), non_eh.len()), (1, 1));
    assert_eq!(ts[0].len(), 21);
    for (a, b) in ts[0].iter().zip(&non_eh[0]) {
        assert_eq!(a.0, b.0);
        // screen y grows downward
        assert!(a.1 >= b.1, "TS above non-EH at x={}", a.0);
    }
    assert!(svg_document(&rows[..1], Chart::MsrVsBeta).is_err());
}

#[test]
fn gain_surface_cells_nonpositive() {
    let rows = sweep(&SweepSpec::default());
    let svg = svg_document(&rows, Chart::GainSurface).unwrap();
    let values: Vec<f64> =
        svg.split("data-value=\"").skip(1).map(|s| s.split('"').next().unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 441);
    assert!(values.iter().all(|v| *v <= 0.0));
    let both = svg_document(&rows, Chart::SurfaceHeatmap).unwrap();
    assert_eq!(both.matches("data-value=").count(), 882);
    let by_power = svg_document(&rows, Chart::MsrVsPtot).unwrap();
    assert_eq!(polylines(&by_power, "ts").len(), 21);
}

#[test]
fn csv_round_trip_to_printed_precision() {
    let rows = sweep(&SweepSpec::default());
    let text = to_csv_string(&rows).unwrap();
    assert_eq!(text.lines().count(), 442);
    let parsed = parse_csv(&text).unwrap();
    assert_eq!(parsed.len(), rows.len());
    for (a, b) in rows.iter().zip(&parsed) {
        for (x, y) in
            [(a.r_sum_ts, b.r_sum_ts), (a.r_sum_non_eh, b.r_sum_non_eh), (a.theta_star, b.theta_star)]
        {
            assert!((x - y).abs() <= 5e-9 * x.abs().max(1e-300), "{x} vs {y}");
        }
    }
    assert_eq!(to_csv_string(&parsed).unwrap(), text);
}

#[test]
fn sweep_is_deterministic() {
    let spec = SweepSpec { beta_steps: 7, ptot_steps: 5, ..Default::default() };
    for method in [Method::Alternating, Method::ExactTheta] {
        let a = run_sweep(&spec, method, &GridSpec::default()).unwrap();
        let b = run_sweep(&spec, method, &GridSpec::default()).unwrap();
        assert_eq!(to_csv_string(&a).unwrap(), to_csv_string(&b).unwrap());
    }
}
