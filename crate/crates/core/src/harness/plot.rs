//! Plot artifacts from experiment CSVs: a self-contained gnuplot script with
//! the data inlined, and an SVG rendered by a minimal internal writer.

use super::run::{CHI2_HEADER, RESULT_HEADER, ROC_HEADER};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Heatmap of the first metric over (n-multiplier or n, k).
    Phase,
    /// Metric against n, one series per metric and (p, k).
    Recovery,
    /// TPR against FPR, one series per cell.
    Roc,
    /// χ² against degree on a log scale, one series per (regime, φ, n).
    Chi2,
}

impl std::str::FromStr for PlotKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phase" => Ok(PlotKind::Phase),
            "recovery" | "recovery-curve" => Ok(PlotKind::Recovery),
            "roc" => Ok(PlotKind::Roc),
            "chi2" | "chi2sweep" => Ok(PlotKind::Chi2),
            other => Err(Error::Parse(format!("unknown plot kind {other:?}"))),
        }
    }
}

impl PlotKind {
    fn header(self) -> &'static [&'static str] {
        match self {
            PlotKind::Phase | PlotKind::Recovery => RESULT_HEADER,
            PlotKind::Roc => ROC_HEADER,
            PlotKind::Chi2 => CHI2_HEADER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotArtifacts {
    pub script: String,
    pub svg: String,
}

#[derive(Debug, Clone, PartialEq)]
struct Series {
    name: String,
    points: Vec<(f64, f64)>,
}

/// Reads the CSV, checks its header against `kind` and renders both artifacts.
/// An empty file renders empty axes.
pub fn render_plots(csv_text: &str, kind: PlotKind) -> Result<PlotArtifacts> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(csv_text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        None => return Ok(empty(kind)),
        Some(h) => h.map_err(|e| Error::Parse(e.to_string()))?,
    };
    let expected = kind.header();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(Error::SchemaMismatch(format!("expected columns {expected:?}")));
    }
    let col = |name: &str| expected.iter().position(|c| *c == name).expect("known column");
    let mut rows = Vec::new();
    for r in records {
        let r = r.map_err(|e| Error::Parse(e.to_string()))?;
        if r.get(col("status")) == Some("ok") {
            rows.push(r);
        }
    }
    let f = |r: &csv::StringRecord, name: &str| r.get(col(name)).and_then(|v| v.parse::<f64>().ok());
    let s = |r: &csv::StringRecord, name: &str| r.get(col(name)).unwrap_or("").to_string();
    Ok(match kind {
        PlotKind::Phase => {
            let metric = rows.first().map(|r| s(r, "metric")).unwrap_or_default();
            let mut cells: BTreeMap<(OrdF64, OrdF64), (f64, usize)> = BTreeMap::new();
            let mut x_label = "n_mult";
            for r in rows.iter().filter(|r| s(r, "metric") == metric) {
                let x = match f(r, "n_mult") {
                    Some(v) => v,
                    None => {
                        x_label = "n";
                        f(r, "n").unwrap_or(f64::NAN)
                    }
                };
                let (Some(k), Some(v)) = (f(r, "k"), f(r, "value")) else { continue };
                let e = cells.entry((OrdF64(x), OrdF64(k))).or_insert((0.0, 0));
                e.0 += v;
                e.1 += 1;
            }
            let grid: Vec<(f64, f64, f64)> = cells.into_iter().map(|((x, k), (sum, c))| (x.0, k.0, sum / c as f64)).collect();
            heatmap(&grid, x_label, "k", &metric)
        }
        PlotKind::Recovery => {
            let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
            for r in &rows {
                if let (Some(n), Some(v)) = (f(r, "n"), f(r, "value")) {
                    series.entry(format!("{} p={} k={}", s(r, "metric"), s(r, "p"), s(r, "k"))).or_default().push((n, v));
                }
            }
            lines(to_series(series), "n", "value", false, "recovery curve")
        }
        PlotKind::Roc => {
            let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
            for r in &rows {
                if let (Some(x), Some(y)) = (f(r, "fpr"), f(r, "tpr")) {
                    series.entry(format!("cell {:0>4} p={} n={} k={}", s(r, "cell"), s(r, "p"), s(r, "n"), s(r, "k"))).or_default().push((x, y));
                }
            }
            lines(to_series(series), "false positive rate", "true positive rate", false, "ROC of max |u_j|")
        }
        PlotKind::Chi2 => {
            let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
            for r in &rows {
                if let (Some(d), Some(v)) = (f(r, "degree"), f(r, "chi2")) {
                    series.entry(format!("{} phi={} p={} k={} n={} s2={}", s(r, "regime"), s(r, "phi"), s(r, "p"), s(r, "k"), s(r, "n"), s(r, "sigma2"))).or_default().push((d, v));
                }
            }
            lines(to_series(series), "degree D", "chi2 (log scale)", true, "low-degree chi-square")
        }
    })
}

/// Writes `<csv>.gp` and `<csv>.svg` next to the CSV and returns their paths.
pub fn emit_plots(csv_path: &Path, kind: PlotKind) -> Result<(PathBuf, PathBuf)> {
    let text = std::fs::read_to_string(csv_path)?;
    let art = render_plots(&text, kind)?;
    let gp = csv_path.with_extension("gp");
    let svg = csv_path.with_extension("svg");
    std::fs::write(&gp, art.script)?;
    std::fs::write(&svg, art.svg)?;
    Ok((gp, svg))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn to_series(m: BTreeMap<String, Vec<(f64, f64)>>) -> Vec<Series> {
    m.into_iter()
        .map(|(name, mut points)| {
            points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            Series { name, points }
        })
        .collect()
}

fn empty(kind: PlotKind) -> PlotArtifacts {
    match kind {
        PlotKind::Phase => heatmap(&[], "n_mult", "k", ""),
        PlotKind::Chi2 => lines(Vec::new(), "degree D", "chi2 (log scale)", true, "low-degree chi-square"),
        _ => lines(Vec::new(), "x", "y", false, ""),
    }
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"];

/// Minimal SVG document builder.
struct Svg(String);

impl Svg {
    fn new() -> Self {
        Svg(format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"))
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        let _ = writeln!(self.0, "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{stroke}\"/>");
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(self.0, "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{fill}\"/>");
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let esc = s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(self.0, "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"{anchor}\">{esc}</text>");
    }

    fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(self.0, "<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>", coords.join(" "));
    }

    fn axes(&mut self, x_label: &str, y_label: &str, title: &str) {
        self.line(LEFT, H - BOTTOM, W - RIGHT, H - BOTTOM, "black");
        self.line(LEFT, TOP, LEFT, H - BOTTOM, "black");
        self.text((LEFT + W - RIGHT) / 2.0, H - 20.0, "middle", x_label);
        let _ = writeln!(self.0, "<text x=\"18\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>", (TOP + H - BOTTOM) / 2.0, (TOP + H - BOTTOM) / 2.0, y_label);
        self.text((LEFT + W - RIGHT) / 2.0, 22.0, "middle", title);
    }

    fn finish(mut self) -> String {
        self.0.push_str("</svg>\n");
        self.0
    }
}

fn range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Value in [0, 1] to a blue-to-yellow color.
fn color(v: f64) -> String {
    let t = v.clamp(0.0, 1.0);
    let r = (40.0 + 215.0 * t) as u8;
    let g = (60.0 + 160.0 * t) as u8;
    let b = (160.0 - 120.0 * t) as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn heatmap(grid: &[(f64, f64, f64)], x_label: &str, y_label: &str, metric: &str) -> PlotArtifacts {
    let mut xs: Vec<f64> = grid.iter().map(|g| g.0).collect();
    let mut ys: Vec<f64> = grid.iter().map(|g| g.1).collect();
    for v in [&mut xs, &mut ys] {
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup();
    }
    let mut svg = Svg::new();
    svg.axes(x_label, y_label, &format!("phase diagram: {metric}"));
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    if !xs.is_empty() {
        let (cw, ch) = (pw / xs.len() as f64, ph / ys.len() as f64);
        for &(x, y, v) in grid {
            let i = xs.iter().position(|a| *a == x).unwrap_or(0);
            let j = ys.iter().position(|a| *a == y).unwrap_or(0);
            let (rx, ry) = (LEFT + i as f64 * cw, H - BOTTOM - (j + 1) as f64 * ch);
            svg.rect(rx, ry, cw, ch, &color(v));
            svg.text(rx + cw / 2.0, ry + ch / 2.0 + 4.0, "middle", &format!("{v:.2}"));
        }
        for (i, x) in xs.iter().enumerate() {
            svg.text(LEFT + (i as f64 + 0.5) * cw, H - BOTTOM + 15.0, "middle", &format!("{x}"));
        }
        for (j, y) in ys.iter().enumerate() {
            svg.text(LEFT - 6.0, H - BOTTOM - (j as f64 + 0.5) * ch + 4.0, "end", &format!("{y}"));
        }
    }
    for s in 0..=4 {
        let v = s as f64 / 4.0;
        svg.rect(W - RIGHT + 20.0, TOP + (4 - s) as f64 * 24.0, 18.0, 24.0, &color(v));
        svg.text(W - RIGHT + 44.0, TOP + (4 - s) as f64 * 24.0 + 16.0, "start", &format!("{v:.2}"));
    }
    let mut script = String::new();
    let _ = writeln!(script, "# phase diagram of {metric}: columns {x_label}, {y_label}, value");
    script.push_str("$data << EOD\n");
    for (x, y, v) in grid {
        let _ = writeln!(script, "{x} {y} {v}");
    }
    script.push_str("EOD\n");
    let _ = writeln!(script, "set xlabel '{x_label}'\nset ylabel '{y_label}'\nset cbrange [0:1]\nset view map\nset title 'phase diagram: {metric}'");
    script.push_str("plot $data using 1:2:3 with image notitle\n");
    PlotArtifacts { script, svg: svg.finish() }
}

fn lines(series: Vec<Series>, x_label: &str, y_label: &str, log_y: bool, title: &str) -> PlotArtifacts {
    let ty = |v: f64| if log_y { v.log10() } else { v };
    let visible = |p: &&(f64, f64)| !log_y || p.1 > 0.0;
    let (x0, x1) = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = range(series.iter().flat_map(|s| s.points.iter().filter(visible).map(|p| ty(p.1))));
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * ph;
    let mut svg = Svg::new();
    svg.axes(x_label, y_label, title);
    for t in 0..=4 {
        let fx = x0 + (x1 - x0) * t as f64 / 4.0;
        let fy = y0 + (y1 - y0) * t as f64 / 4.0;
        svg.text(sx(fx), H - BOTTOM + 15.0, "middle", &format!("{fx:.3}"));
        let label = if log_y { format!("1e{fy:.1}") } else { format!("{fy:.3}") };
        svg.text(LEFT - 6.0, sy(fy) + 4.0, "end", &label);
    }
    for (i, s) in series.iter().enumerate() {
        let c = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s.points.iter().filter(visible).map(|p| (sx(p.0), sy(ty(p.1)))).collect();
        svg.polyline(&pts, c);
        if i < 16 {
            svg.line(W - RIGHT + 10.0, TOP + 14.0 * i as f64, W - RIGHT + 28.0, TOP + 14.0 * i as f64, c);
            svg.text(W - RIGHT + 32.0, TOP + 14.0 * i as f64 + 4.0, "start", &s.name);
        }
    }
    let mut script = String::new();
    let _ = writeln!(script, "# {title}");
    for (i, s) in series.iter().enumerate() {
        let _ = writeln!(script, "$s{i} << EOD");
        for (x, y) in &s.points {
            let _ = writeln!(script, "{x} {y}");
        }
        script.push_str("EOD\n");
    }
    let _ = writeln!(script, "set xlabel '{x_label}'\nset ylabel '{y_label}'\nset title '{title}'\nset key outside right");
    if log_y {
        script.push_str("set logscale y\n");
    }
    if series.is_empty() {
        script.push_str("plot [0:1] [0:1] NaN notitle\n");
    } else {
        let parts: Vec<String> = series.iter().enumerate().map(|(i, s)| format!("$s{i} using 1:2 with linespoints title '{}'", s.name.replace('\'', ""))).collect();
        let _ = writeln!(script, "plot {}", parts.join(", \\\n     "));
    }
    PlotArtifacts { script, svg: svg.finish() }
}
