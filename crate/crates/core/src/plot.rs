//! Convergence plots as standalone SVG.
//!
//! Two polylines against the iteration index: the energy error (when the
//! trace carries one) and the largest pool gradient. Output bytes depend
//! only on the trace.

use std::fmt::Write as _;

use crate::adapt::AdaptTrace;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
/// Log-scale stand-in for zero and negative values.
const LOG_FLOOR: f64 = 1e-16;

const ERROR_COLOR: &str = "#1f77b4";
const GRAD_COLOR: &str = "#d62728";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotOptions {
    pub log_y: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { log_y: true }
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn value(&self, v: f64) -> f64 {
        if self.log {
            v.max(LOG_FLOOR).log10()
        } else {
            v
        }
    }

    fn y(&self, v: f64) -> f64 {
        let t = (self.value(v) - self.lo) / (self.hi - self.lo);
        TOP + (1.0 - t) * (HEIGHT - TOP - BOTTOM)
    }
}

fn x_pos(iter: usize, max_iter: usize) -> f64 {
    let span = max_iter.max(1) as f64;
    LEFT + iter as f64 / span * (WIDTH - LEFT - RIGHT)
}

pub fn render_svg(trace: &AdaptTrace, opts: PlotOptions) -> Result<String> {
    if trace.records.is_empty() {
        return Err(Error::Invalid("cannot plot an empty trace".into()));
    }
    let has_error = trace.records.iter().any(|r| r.error.is_some());
    let mut series: Vec<(&str, &str, Vec<(usize, f64)>)> = Vec::new();
    if has_error {
        let pts = trace
            .records
            .iter()
            .filter_map(|r| r.error.map(|e| (r.iter, e)))
            .collect();
        series.push(("error", ERROR_COLOR, pts));
    }
    series.push((
        "max gradient",
        GRAD_COLOR,
        trace.records.iter().map(|r| (r.iter, r.max_grad)).collect(),
    ));

    let max_iter = trace.records.iter().map(|r| r.iter).max().unwrap_or(0);
    let mut axis = Axis {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
        log: opts.log_y,
    };
    for (_, _, pts) in &series {
        for &(_, v) in pts {
            let t = axis.value(v);
            axis.lo = axis.lo.min(t);
            axis.hi = axis.hi.max(t);
        }
    }
    if axis.log {
        axis.lo = axis.lo.floor();
        axis.hi = axis.hi.ceil();
    }
    if axis.hi - axis.lo < 1e-12 {
        axis.hi = axis.lo + 1.0;
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        svg,
        "<path d=\"M{x0:.2},{y1:.2} L{x0:.2},{y0:.2} L{x1:.2},{y0:.2}\" fill=\"none\" stroke=\"black\"/>"
    );

    // y ticks: every decade on a log axis, five steps otherwise
    let ticks: Vec<f64> = if axis.log {
        let step = ((axis.hi - axis.lo) / 8.0).ceil().max(1.0);
        let mut t = axis.lo;
        let mut v = Vec::new();
        while t <= axis.hi + 1e-9 {
            v.push(t);
            t += step;
        }
        v
    } else {
        (0..=5).map(|i| axis.lo + (axis.hi - axis.lo) * i as f64 / 5.0).collect()
    };
    for t in ticks {
        let raw = if axis.log { 10f64.powf(t) } else { t };
        let y = axis.y(raw);
        let label = if axis.log { format!("1e{}", t as i64) } else { format!("{t:.3e}") };
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>",
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{label}</text>",
            x0 - 8.0,
            y + 4.0
        );
    }
    let x_step = (max_iter / 10).max(1);
    for it in (0..=max_iter).step_by(x_step) {
        let x = x_pos(it, max_iter);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{it}</text>",
            y0 + 18.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">iteration</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    );

    for (name, color, pts) in &series {
        let coords: Vec<String> = pts
            .iter()
            .map(|&(it, v)| format!("{:.2},{:.2}", x_pos(it, max_iter), axis.y(v)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline class=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            name.replace(' ', "-"),
            coords.join(" ")
        );
    }

    for (i, (name, color, _)) in series.iter().enumerate() {
        let y = TOP + 12.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            x1 - 120.0,
            x1 - 100.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{name}</text>",
            x1 - 95.0,
            y + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
