//! Trace CSV and SVG convergence plots.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::bench::compare::TraceRun;
use crate::engine::IterationTrace;
use crate::error::{Error, Result};

/// Norms at or below this are drawn at the floor of the log axis.
pub const LOG_FLOOR: f64 = 1e-16;

pub const TRACE_CSV_HEADER: [&str; 8] = [
    "matrix_index",
    "solver",
    "iteration",
    "dimension",
    "subdiag_norm",
    "shift_re",
    "shift_im",
    "deflated",
];

#[derive(Serialize)]
struct TraceRow<'a> {
    matrix_index: usize,
    solver: &'a str,
    iteration: usize,
    dimension: usize,
    subdiag_norm: f64,
    shift_re: Option<f64>,
    shift_im: Option<f64>,
    deflated: bool,
}

/// One CSV row per trace record across all runs; the header is always written.
pub fn write_trace_csv<W: std::io::Write>(runs: &[TraceRun<'_>], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(TRACE_CSV_HEADER)?;
    for run in runs {
        for r in &run.trace.records {
            w.serialize(TraceRow {
                matrix_index: run.matrix_index,
                solver: run.solver,
                iteration: r.iteration,
                dimension: r.dimension,
                subdiag_norm: r.subdiag_norm,
                shift_re: r.shift.map(|s| s.re),
                shift_im: r.shift.map(|s| s.im),
                deflated: r.is_deflation(),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn emit_trace_csv(runs: &[TraceRun<'_>], path: impl AsRef<Path>) -> Result<()> {
    if runs.is_empty() {
        return Err(Error::Usage("no traces to write".into()));
    }
    let file = fs::File::create(path)?;
    write_trace_csv(runs, std::io::BufWriter::new(file))
}

/// One solver's contribution to a convergence figure.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    /// Bar height in the iteration panel.
    pub iterations: f64,
    /// Subdiagonal norm per iteration, for the log-scale panel.
    pub norms: Vec<f64>,
}

impl PlotSeries {
    pub fn from_trace(label: impl Into<String>, iterations: f64, trace: &IterationTrace) -> Self {
        Self {
            label: label.into(),
            iterations,
            norms: trace.records.iter().map(|r| r.subdiag_norm).collect(),
        }
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 300.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn log_norm(x: f64) -> f64 {
    x.max(LOG_FLOOR).log10()
}

/// Two panels: iteration counts as bars (left) and log₁₀ subdiagonal norm
/// per iteration, one polyline per series (right).
pub fn render_convergence_svg(series: &[PlotSeries], title: &str) -> Result<String> {
    if series.is_empty() {
        return Err(Error::Usage("nothing to plot".into()));
    }
    let width = 2.0 * PANEL_W + 3.0 * MARGIN;
    let height = PANEL_H + 2.0 * MARGIN + 20.0 * series.len() as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        width / 2.0,
        escape(title)
    );

    // Left panel: bars.
    let (x0, y0) = (MARGIN, MARGIN);
    let max_iter = series
        .iter()
        .map(|p| p.iterations)
        .filter(|v| v.is_finite())
        .fold(1.0f64, f64::max);
    let _ = writeln!(s, r#"<g class="iterations">"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">(a) Iterations required</text>"#,
        x0 + PANEL_W / 2.0,
        y0 - 10.0
    );
    axes(&mut s, x0, y0);
    let slot = PANEL_W / series.len() as f64;
    for (k, p) in series.iter().enumerate() {
        let v = if p.iterations.is_finite() { p.iterations } else { 0.0 };
        let h = PANEL_H * v / max_iter;
        let bx = x0 + slot * k as f64 + slot * 0.15;
        let _ = writeln!(
            s,
            r#"<rect class="bar" x="{bx:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="{}"/>"#,
            y0 + PANEL_H - h,
            slot * 0.7,
            PALETTE[k % PALETTE.len()]
        );
        let _ = writeln!(
            s,
            r#"<text class="bar-value" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bx + slot * 0.35,
            y0 + PANEL_H - h - 4.0,
            format_count(v)
        );
        let _ = writeln!(
            s,
            r#"<text class="bar-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bx + slot * 0.35,
            y0 + PANEL_H + 16.0,
            escape(&p.label)
        );
    }
    let _ = writeln!(s, "</g>");

    // Right panel: log-scale norm curves.
    let x1 = 2.0 * MARGIN + PANEL_W;
    let max_len = series.iter().map(|p| p.norms.len()).max().unwrap_or(0).max(1);
    let logs: Vec<f64> = series.iter().flat_map(|p| p.norms.iter().map(|&v| log_norm(v))).collect();
    let lo = logs.iter().copied().fold(log_norm(LOG_FLOOR), f64::min).floor();
    let hi = logs.iter().copied().fold(lo + 1.0, f64::max).ceil();
    let _ = writeln!(s, r#"<g class="norms">"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">(b) log10 subdiagonal norm</text>"#,
        x1 + PANEL_W / 2.0,
        y0 - 10.0
    );
    axes(&mut s, x1, y0);
    for tick in [lo, (lo + hi) / 2.0, hi] {
        let y = y0 + PANEL_H * (hi - tick) / (hi - lo);
        let _ = writeln!(
            s,
            r#"<text class="tick" x="{:.1}" y="{:.1}" text-anchor="end">1e{:.0}</text>"#,
            x1 - 6.0,
            y + 4.0,
            tick
        );
    }
    let _ = writeln!(
        s,
        r#"<text class="tick" x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
        x1 + PANEL_W,
        y0 + PANEL_H + 16.0,
        max_len
    );
    for (k, p) in series.iter().enumerate() {
        let points: Vec<String> = p
            .norms
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let x = x1 + PANEL_W * (i + 1) as f64 / max_len as f64;
                let y = y0 + PANEL_H * (hi - log_norm(v)) / (hi - lo);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" data-label="{}" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            escape(&p.label),
            PALETTE[k % PALETTE.len()],
            points.join(" ")
        );
    }
    let _ = writeln!(s, "</g>");

    // Legend.
    let _ = writeln!(s, r#"<g class="legend-block">"#);
    for (k, p) in series.iter().enumerate() {
        let ly = y0 + PANEL_H + 40.0 + 20.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{x1:.1}" y="{:.1}" width="14" height="4" fill="{}"/>"#,
            ly - 6.0,
            PALETTE[k % PALETTE.len()]
        );
        let _ = writeln!(
            s,
            r#"<text class="legend" x="{:.1}" y="{ly:.1}">{}</text>"#,
            x1 + 20.0,
            escape(&p.label)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    Ok(s)
}

fn format_count(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.1}")
    }
}

fn axes(s: &mut String, x: f64, y: f64) {
    let _ = writeln!(
        s,
        r#"<path class="axis" d="M{x:.1},{y:.1} V{:.1} H{:.1}" stroke="black" fill="none"/>"#,
        y + PANEL_H,
        x + PANEL_W
    );
}

pub fn emit_convergence_svg(series: &[PlotSeries], title: &str, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_convergence_svg(series, title)?)?;
    Ok(())
}
