//! Standalone SVG charts of sweep results.
//!
//! Line charts draw one TS-TWR polyline (solid) and one non-EH polyline
//! (dashed) per value of the other sweep axis, each pair in its own color.
//! Heatmaps color each `(β, P_tot)` cell on a linear five-stop viridis scale
//! `#440154 → #3b528b → #21918c → #5ec962 → #fde725` from the smallest to
//! the largest plotted value; a color bar gives both ends. Each polyline
//! carries `class` and `data-group` attributes and each cell a `data-value`
//! attribute, so the rendered data can be checked textually.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::experiments::sweep::SweepRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Sum rate of both schemes over the `(β, P_tot)` plane.
    SurfaceHeatmap,
    MsrVsBeta,
    MsrVsPtot,
    /// Relative gain of TS-TWR over non-EH on the `(β, P_tot)` plane.
    GainSurface,
}

impl Chart {
    pub const ALL: [Chart; 4] =
        [Chart::SurfaceHeatmap, Chart::MsrVsBeta, Chart::MsrVsPtot, Chart::GainSurface];

    pub fn tag(self) -> &'static str {
        match self {
            Chart::SurfaceHeatmap => "surface-as-heatmap",
            Chart::MsrVsBeta => "msr-vs-beta",
            Chart::MsrVsPtot => "msr-vs-ptot",
            Chart::GainSurface => "gain-surface",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Chart::ALL.into_iter().find(|c| c.tag() == s).ok_or_else(|| invalid(format!("unknown chart {s:?}")))
    }
}

pub fn render_svg(rows: &[SweepRow], chart: Chart, path: &Path) -> Result<()> {
    let doc = svg_document(rows, chart)?;
    fs::write(path, doc).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn svg_document(rows: &[SweepRow], chart: Chart) -> Result<String> {
    match chart {
        Chart::MsrVsBeta => line_chart(rows, Axis::Beta),
        Chart::MsrVsPtot => line_chart(rows, Axis::Ptot),
        Chart::SurfaceHeatmap => heatmap(
            rows,
            "Maximum sum rate, TS-TWR vs non-EH (bits/block)",
            &[("TS-TWR", |r: &SweepRow| r.r_sum_ts), ("non-EH", |r: &SweepRow| r.r_sum_non_eh)],
        ),
        Chart::GainSurface => heatmap(
            rows,
            "Relative gain of TS-TWR over non-EH",
            &[("G(TS:non-EH)", |r: &SweepRow| r.gain_ts_vs_non_eh)],
        ),
    }
}

#[derive(Clone, Copy)]
enum Axis {
    Beta,
    Ptot,
}

impl Axis {
    fn of(self, r: &SweepRow) -> f64 {
        match self {
            Axis::Beta => r.beta_db,
            Axis::Ptot => r.ptot_dbw,
        }
    }

    fn other(self) -> Axis {
        match self {
            Axis::Beta => Axis::Ptot,
            Axis::Ptot => Axis::Beta,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Axis::Beta => "β (dB)",
            Axis::Ptot => "P_tot (dBW)",
        }
    }

    fn short(self) -> &'static str {
        match self {
            Axis::Beta => "β",
            Axis::Ptot => "P_tot",
        }
    }

    fn unit(self) -> &'static str {
        match self {
            Axis::Beta => "dB",
            Axis::Ptot => "dBW",
        }
    }
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf",
];

const VIRIDIS: [(f64, f64, f64); 5] =
    [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];

/// Sorts by value; keys are compared by bit pattern after canonicalizing -0.
fn key(v: f64) -> OrderedKey {
    OrderedKey(if v == 0.0 { 0.0 } else { v })
}

#[derive(Clone, Copy, PartialEq)]
struct OrderedKey(f64);

impl Eq for OrderedKey {}

impl PartialOrd for OrderedKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

struct Frame {
    width: f64,
    height: f64,
    left: f64,
    right: f64,
    top: f64,
    bottom: f64,
}

impl Frame {
    fn plot_w(&self) -> f64 {
        self.width - self.left - self.right
    }

    fn plot_h(&self) -> f64 {
        self.height - self.top - self.bottom
    }
}

fn line_chart(rows: &[SweepRow], x_axis: Axis) -> Result<String> {
    let group_axis = x_axis.other();
    let mut groups: BTreeMap<OrderedKey, Vec<&SweepRow>> = BTreeMap::new();
    for r in rows {
        groups.entry(key(group_axis.of(r))).or_default().push(r);
    }
    if groups.is_empty() {
        return Err(Error::Validation("no rows to plot".into()));
    }
    for (g, members) in &mut groups {
        members.sort_by(|a, b| x_axis.of(a).total_cmp(&x_axis.of(b)));
        members.dedup_by(|a, b| x_axis.of(a) == x_axis.of(b));
        if members.len() < 2 {
            return Err(Error::Validation(format!(
                "{} chart needs at least two {} values for {} = {}",
                x_axis.short(),
                x_axis.short(),
                group_axis.short(),
                g.0
            )));
        }
    }

    let (x_lo, x_hi) = bounds(rows.iter().map(|r| x_axis.of(r)));
    let (_, y_top) = bounds(rows.iter().flat_map(|r| [r.r_sum_ts, r.r_sum_non_eh]));
    let (y_lo, y_hi) = (0.0, if y_top > 0.0 { y_top * 1.05 } else { 1.0 });

    let frame = Frame { width: 760.0, height: 480.0, left: 70.0, right: 190.0, top: 40.0, bottom: 60.0 };
    let sx = |x: f64| frame.left + (x - x_lo) / (x_hi - x_lo) * frame.plot_w();
    let sy = |y: f64| frame.top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * frame.plot_h();

    let mut s = String::new();
    header(&mut s, &frame, &format!("Maximum sum rate versus {}", x_axis.short()));
    axes(&mut s, &frame, (x_lo, x_hi), (y_lo, y_hi), x_axis.label(), "MSR (bits/block)");

    for (k, (g, members)) in groups.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        for (class, dash, value) in [
            ("ts", "", (|r: &SweepRow| r.r_sum_ts) as fn(&SweepRow) -> f64),
            ("non-eh", " stroke-dasharray=\"6 4\"", |r: &SweepRow| r.r_sum_non_eh),
        ] {
            let points: Vec<String> =
                members.iter().map(|r| format!("{:.2},{:.2}", sx(x_axis.of(r)), sy(value(r)))).collect();
            let _ = writeln!(
                s,
                "<polyline class=\"{class}\" data-group=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>",
                g.0,
                points.join(" ")
            );
        }
    }

    // legend
    let lx = frame.width - frame.right + 16.0;
    let mut ly = frame.top + 8.0;
    for (label, dash) in [("TS-TWR", ""), ("non-EH", " stroke-dasharray=\"6 4\"")] {
        let _ = writeln!(
            s,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"#000\" stroke-width=\"1.5\"{dash}/>",
            lx + 28.0
        );
        let _ =
            writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{label}</text>", lx + 34.0, ly + 4.0);
        ly += 18.0;
    }
    ly += 6.0;
    for (k, g) in groups.keys().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            s,
            "<rect x=\"{lx:.2}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"{color}\"/>",
            ly - 6.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{} = {} {}</text>",
            lx + 16.0,
            ly + 3.0,
            group_axis.short(),
            tick_label(g.0),
            group_axis.unit()
        );
        ly += 15.0;
    }
    s.push_str("</svg>\n");
    Ok(s)
}

type Extract = fn(&SweepRow) -> f64;

fn heatmap(rows: &[SweepRow], title: &str, panels: &[(&str, Extract)]) -> Result<String> {
    let mut cells: BTreeMap<(OrderedKey, OrderedKey), &SweepRow> = BTreeMap::new();
    for r in rows {
        cells.insert((key(r.beta_db), key(r.ptot_dbw)), r);
    }
    let betas: Vec<f64> = dedup_sorted(rows.iter().map(|r| r.beta_db));
    let ptots: Vec<f64> = dedup_sorted(rows.iter().map(|r| r.ptot_dbw));
    if betas.len() < 2 || ptots.len() < 2 {
        return Err(Error::Validation(format!(
            "heatmap needs at least two β and two P_tot values, got {}x{}",
            betas.len(),
            ptots.len()
        )));
    }
    if cells.len() != betas.len() * ptots.len() {
        return Err(Error::Validation(format!(
            "heatmap needs a full grid: {} cells for {}x{} axes",
            cells.len(),
            betas.len(),
            ptots.len()
        )));
    }

    let (v_lo, v_hi) = bounds(panels.iter().flat_map(|(_, f)| rows.iter().map(f)));
    let panel_w = 320.0;
    let panel_gap = 60.0;
    let frame = Frame {
        width: 70.0 + panels.len() as f64 * (panel_w + panel_gap) + 100.0,
        height: 480.0,
        left: 70.0,
        right: 100.0,
        top: 50.0,
        bottom: 60.0,
    };
    let cw = panel_w / betas.len() as f64;
    let chh = frame.plot_h() / ptots.len() as f64;

    let mut s = String::new();
    header(&mut s, &frame, title);
    for (p, (name, value)) in panels.iter().enumerate() {
        let x0 = frame.left + p as f64 * (panel_w + panel_gap);
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{name}</text>",
            x0 + panel_w / 2.0,
            frame.top - 8.0
        );
        let _ = writeln!(s, "<g class=\"panel\" data-panel=\"{name}\">");
        for (i, b) in betas.iter().enumerate() {
            for (j, pt) in ptots.iter().enumerate() {
                let r = cells[&(key(*b), key(*pt))];
                let v = value(r);
                let y = frame.top + (ptots.len() - 1 - j) as f64 * chh;
                let _ = writeln!(
                    s,
                    "<rect x=\"{:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\" data-value=\"{v}\"/>",
                    x0 + i as f64 * cw,
                    cw + 0.3,
                    chh + 0.3,
                    color_at(v, v_lo, v_hi)
                );
            }
        }
        s.push_str("</g>\n");
        let _ = writeln!(
            s,
            "<rect x=\"{x0:.2}\" y=\"{:.2}\" width=\"{panel_w:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#000\"/>",
            frame.top,
            frame.plot_h()
        );
        let x_ticks = [betas[0], betas[betas.len() / 2], betas[betas.len() - 1]];
        for t in x_ticks {
            let i = betas.iter().position(|&b| b == t).unwrap_or(0);
            let _ = writeln!(
                s,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
                x0 + (i as f64 + 0.5) * cw,
                frame.top + frame.plot_h() + 16.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            x0 + panel_w / 2.0,
            frame.height - 20.0,
            Axis::Beta.label()
        );
        if p == 0 {
            let y_ticks = [ptots[0], ptots[ptots.len() / 2], ptots[ptots.len() - 1]];
            for t in y_ticks {
                let j = ptots.iter().position(|&q| q == t).unwrap_or(0);
                let _ = writeln!(
                    s,
                    "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>",
                    x0 - 6.0,
                    frame.top + (ptots.len() as f64 - j as f64 - 0.5) * chh + 4.0,
                    tick_label(t)
                );
            }
            let _ = writeln!(
                s,
                "<text transform=\"translate(18,{:.2}) rotate(-90)\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
                frame.top + frame.plot_h() / 2.0,
                Axis::Ptot.label()
            );
        }
    }

    // color bar
    let bx = frame.width - frame.right + 30.0;
    s.push_str("<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">");
    for (k, (r, g, b)) in VIRIDIS.iter().enumerate() {
        let _ = write!(
            s,
            "<stop offset=\"{}\" stop-color=\"{}\"/>",
            k as f64 / (VIRIDIS.len() - 1) as f64,
            hex(*r, *g, *b)
        );
    }
    s.push_str("</linearGradient></defs>\n");
    let _ = writeln!(
        s,
        "<rect x=\"{bx:.2}\" y=\"{:.2}\" width=\"16\" height=\"{:.2}\" fill=\"url(#scale)\" stroke=\"#000\"/>",
        frame.top,
        frame.plot_h()
    );
    for (v, y) in [(v_hi, frame.top + 4.0), (v_lo, frame.top + frame.plot_h())] {
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{y:.2}\" font-size=\"11\">{}</text>",
            bx + 20.0,
            tick_label(v)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn header(s: &mut String, frame: &Frame, title: &str) {
    let _ = writeln!(s, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\">",
        w = frame.width,
        h = frame.height
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{title}</text>",
        frame.width / 2.0
    );
}

fn axes(s: &mut String, frame: &Frame, x: (f64, f64), y: (f64, f64), x_label: &str, y_label: &str) {
    let (x0, y0) = (frame.left, frame.top + frame.plot_h());
    let _ = writeln!(
        s,
        "<rect x=\"{x0:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#000\"/>",
        frame.top,
        frame.plot_w(),
        frame.plot_h()
    );
    for t in nice_ticks(x.0, x.1) {
        let px = frame.left + (t - x.0) / (x.1 - x.0) * frame.plot_w();
        let _ = writeln!(
            s,
            "<line x1=\"{px:.2}\" y1=\"{y0:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#000\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            y0 + 18.0,
            tick_label(t)
        );
    }
    for t in nice_ticks(y.0, y.1) {
        let py = frame.top + (1.0 - (t - y.0) / (y.1 - y.0)) * frame.plot_h();
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#ddd\"/>",
            x0,
            x0 + frame.plot_w()
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>",
            x0 - 6.0,
            py + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{x_label}</text>",
        frame.left + frame.plot_w() / 2.0,
        frame.height - 18.0
    );
    let _ = writeln!(
        s,
        "<text transform=\"translate(18,{:.2}) rotate(-90)\" font-size=\"12\" text-anchor=\"middle\">{y_label}</text>",
        frame.top + frame.plot_h() / 2.0
    );
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn dedup_sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.map(|x| key(x).0).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Ticks at 1, 2 or 5 times a power of ten, about five across the range.
fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r}")
}

fn color_at(v: f64, lo: f64, hi: f64) -> String {
    let t = if hi > lo { ((v - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.5 };
    let pos = t * (VIRIDIS.len() - 1) as f64;
    let k = (pos.floor() as usize).min(VIRIDIS.len() - 2);
    let f = pos - k as f64;
    let (a, b) = (VIRIDIS[k], VIRIDIS[k + 1]);
    hex(a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1), a.2 + f * (b.2 - a.2))
}

fn hex(r: f64, g: f64, b: f64) -> String {
    format!("#{:02x}{:02x}{:02x}", r.round() as u8, g.round() as u8, b.round() as u8)
}
