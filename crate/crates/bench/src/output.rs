//! CSV and SVG artifacts for sweep results.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{BenchError, Result};
use crate::spec::Axis;
use crate::sweep::{Cell, SweepResult};

pub const CSV_HEADER: &str =
    "axis,axis_value,algorithm,trials,failures,failure_rate,mean_iterations,mean_runtime_ms,base_seed";

/// Renders the result table. Floats use the shortest decimal form that
/// parses back to the same value.
pub fn format_csv(result: &SweepResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in &result.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            result.axis,
            c.axis_value,
            c.algorithm,
            c.trials,
            c.failures,
            c.failure_rate,
            c.mean_iterations,
            c.mean_runtime_ms,
            result.base_seed
        )
        .unwrap();
    }
    out
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, format_csv(result)).map_err(|e| BenchError::io(path, e))
}

/// Table read back from [`format_csv`] output.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub axis: Axis,
    pub base_seed: u64,
    pub cells: Vec<Cell>,
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let bad = |line: usize, msg: &str| BenchError::InvalidSpec(format!("csv line {line}: {msg}"));
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(bad(1, "unexpected header"));
    }
    let mut axis = None;
    let mut seed = None;
    let mut cells = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(bad(lineno, "expected 9 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(lineno, "bad number"));
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad(lineno, "bad integer"));
        let row_axis: Axis = f[0].parse()?;
        let row_seed: u64 = f[8].parse().map_err(|_| bad(lineno, "bad seed"))?;
        if axis.is_some_and(|a| a != row_axis) || seed.is_some_and(|s| s != row_seed) {
            return Err(bad(lineno, "axis or seed differs from earlier rows"));
        }
        axis = Some(row_axis);
        seed = Some(row_seed);
        cells.push(Cell {
            axis_value: num(f[1])?,
            algorithm: f[2].to_string(),
            trials: int(f[3])?,
            failures: int(f[4])?,
            failure_rate: num(f[5])?,
            mean_iterations: num(f[6])?,
            mean_runtime_ms: num(f[7])?,
        });
    }
    match (axis, seed) {
        (Some(axis), Some(base_seed)) => Ok(CsvTable { axis, base_seed, cells }),
        _ => Err(bad(2, "no data rows")),
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Horizontal pixel position of an axis value.
fn x_pos(v: f64, lo: f64, hi: f64) -> f64 {
    let span = WIDTH - LEFT - RIGHT;
    if hi > lo {
        LEFT + (v - lo) / (hi - lo) * span
    } else {
        LEFT + span / 2.0
    }
}

/// Vertical pixel position of a failure rate in [0, 1].
fn y_pos(rate: f64) -> f64 {
    TOP + (1.0 - rate) * (HEIGHT - TOP - BOTTOM)
}

/// Renders failure rate against the sweep axis as a standalone SVG: one
/// polyline with circle markers per algorithm and a legend sorted by name.
pub fn format_plot(result: &SweepResult) -> String {
    let values: Vec<f64> = {
        let mut v: Vec<f64> = result.cells.iter().map(|c| c.axis_value).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let (lo, hi) = (values[0], values[values.len() - 1]);
    let mut algorithms: Vec<&str> = result.cells.iter().map(|c| c.algorithm.as_str()).collect();
    algorithms.sort_unstable();
    algorithms.dedup();

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();

    // Frame, ticks and labels.
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, y_pos(0.0), y_pos(1.0));
    writeln!(s, r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#).unwrap();
    for i in 0..=4 {
        let rate = i as f64 / 4.0;
        let y = y_pos(rate);
        writeln!(s, r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/>"#, x0 - 5.0).unwrap();
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{rate}</text>"#, x0 - 8.0, y + 4.0).unwrap();
    }
    for &v in &values {
        let x = x_pos(v, lo, hi);
        writeln!(s, r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/>"#, y0 + 5.0).unwrap();
        writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{v}</text>"#, y0 + 20.0).unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        result.axis.label()
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">failure rate</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    )
    .unwrap();

    for (i, alg) in algorithms.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let curve = result.curve(alg);
        let points: Vec<String> = curve
            .iter()
            .map(|&(v, r)| format!("{},{}", x_pos(v, lo, hi), y_pos(r)))
            .collect();
        writeln!(
            s,
            r#"<polyline data-algorithm="{alg}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            points.join(" ")
        )
        .unwrap();
        for &(v, r) in &curve {
            writeln!(
                s,
                r#"<circle data-algorithm="{alg}" data-value="{v}" data-rate="{r}" cx="{}" cy="{}" r="3.5" fill="{color}"/>"#,
                x_pos(v, lo, hi),
                y_pos(r)
            )
            .unwrap();
        }
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        )
        .unwrap();
        writeln!(s, r#"<text class="legend" x="{}" y="{}">{alg}</text>"#, lx + 26.0, ly + 4.0).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_plot(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, format_plot(result)).map_err(|e| BenchError::io(path, e))
}
