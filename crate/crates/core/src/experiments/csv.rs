//! Sweep rows as comma-separated text.
//!
//! The header line is fixed, numbers carry 9 significant digits in the
//! shortest of fixed or exponent notation (as C's `%.9g`), lines end with LF
//! and there is no trailing blank line.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::sweep::SweepRow;

pub const CSV_HEADER: &str =
    "beta_db,ptot_dbw,eta,theta_star,omega_star,r_sum_ts,r_sum_non_eh,gain_ts_vs_non_eh";

const SIGNIFICANT: usize = 9;

pub fn to_csv_string(rows: &[SweepRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Validation("cannot write a CSV with no rows".into()));
    }
    let mut out = String::from(CSV_HEADER);
    for r in rows {
        out.push('\n');
        let fields = [
            r.beta_db,
            r.ptot_dbw,
            r.eta,
            r.theta_star,
            r.omega_star,
            r.r_sum_ts,
            r.r_sum_non_eh,
            r.gain_ts_vs_non_eh,
        ];
        let line: Vec<String> = fields.iter().map(|&v| format_significant(v, SIGNIFICANT)).collect();
        out.push_str(&line.join(","));
    }
    Ok(out)
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let text = to_csv_string(rows)?;
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Reads rows written by [`emit_csv`]; `converged` is not stored and comes
/// back `true`.
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        Some(h) => return Err(Error::Parse { line: 1, message: format!("unexpected header {h:?}") }),
        None => return Err(Error::Parse { line: 1, message: "empty input".into() }),
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let line_no = k + 2;
            let values = line
                .split(',')
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| Error::Parse { line: line_no, message: format!("{f:?}: {e}") })
                })
                .collect::<Result<Vec<f64>>>()?;
            let [beta_db, ptot_dbw, eta, theta_star, omega_star, r_sum_ts, r_sum_non_eh, gain] = values[..]
            else {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 8 fields, found {}", values.len()),
                });
            };
            Ok(SweepRow {
                beta_db,
                ptot_dbw,
                eta,
                theta_star,
                omega_star,
                r_sum_ts,
                r_sum_non_eh,
                gain_ts_vs_non_eh: gain,
                converged: true,
            })
        })
        .collect()
}

/// `%.{digits}g`-style formatting: fixed notation for decimal exponents in
/// `[-4, digits)`, exponent notation otherwise, trailing zeros removed.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(v: f64) -> SweepRow {
        SweepRow {
            beta_db: 0.0,
            ptot_dbw: 0.0,
            eta: 1.0,
            theta_star: 0.2,
            omega_star: 0.5,
            r_sum_ts: v,
            r_sum_non_eh: 0.736965594,
            gain_ts_vs_non_eh: (v - 0.736965594) / 0.736965594,
            converged: true,
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.0, 9), "0");
        assert_eq!(format_significant(-0.0, 9), "0");
        assert_eq!(format_significant(1.0, 9), "1");
        assert_eq!(format_significant(-10.0, 9), "-10");
        assert_eq!(format_significant(0.2, 9), "0.2");
        assert_eq!(format_significant(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(format_significant(123456789.4, 9), "123456789");
        assert_eq!(format_significant(1234567890.0, 9), "1.23456789e+09");
        assert_eq!(format_significant(0.0001234, 9), "0.0001234");
        assert_eq!(format_significant(0.00001234, 9), "1.234e-05");
        assert_eq!(format_significant(0.99999999999, 9), "1");
    }

    #[test]
    fn empty_rows_rejected() {
        assert!(matches!(to_csv_string(&[]), Err(Error::Validation(_))));
    }

    #[test]
    fn single_row_layout() {
        let text = to_csv_string(&[row(0.633985000288)]).unwrap();
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "0,0,1,0.2,0.5,0.633985,0.736965594,-0.139735959");
        assert!(!text.ends_with('\n'));
        assert_eq!(parse_csv(&text).unwrap().len(), 1);
    }

    #[test]
    fn unwritable_path_names_file() {
        let path = Path::new("/nonexistent-dir/out.csv");
        let err = emit_csv(&[row(0.5)], path).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/out.csv"));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_csv("").is_err());
        assert!(parse_csv("a,b\n1,2").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3")).is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3,4,5,6,7,x")).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_to_printed_precision(v in -1e6f64..1e6, e in -30i32..30) {
            let x = v * 10f64.powi(e);
            let printed = format_significant(x, 9);
            let back: f64 = printed.parse().unwrap();
            prop_assert!((back - x).abs() <= 5e-9 * x.abs());
            prop_assert_eq!(format_significant(back, 9), printed);
        }
    }
}
