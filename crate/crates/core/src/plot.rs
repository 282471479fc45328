//! Minimal static SVG line plots.
//!
//! Output depends only on the input data, so identical inputs give
//! byte-identical documents.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A named polyline.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }
}

/// Axis scaling and labels.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Axes {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_log: bool,
    pub y_log: bool,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Scale {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            lo -= 0.5;
            hi += 0.5;
        }
        Self { lo, hi, log }
    }

    fn unit(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions in data units.
    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            if b >= a {
                return (a..=b).map(|e| 10f64.powi(e)).collect();
            }
        }
        let (lo, hi) = if self.log { (10f64.powf(self.lo), 10f64.powf(self.hi)) } else { (self.lo, self.hi) };
        (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".into() } else { s.into() }
    }
}

/// Renders the series as a standalone SVG 1.1 document.
///
/// Non-finite points are skipped and split the polyline. Nonpositive
/// coordinates on a logarithmic axis are a domain error.
pub fn emit_svg(series: &[Series], axes: &Axes) -> Result<String> {
    if series.is_empty() || series.iter().all(|s| s.points.iter().all(|p| !p.0.is_finite() || !p.1.is_finite())) {
        return Err(Error::EmptySeries);
    }
    for s in series {
        for &(x, y) in &s.points {
            if (axes.x_log && x <= 0.0) || (axes.y_log && y <= 0.0) {
                return Err(Error::Domain(format!(
                    "series `{}` has point ({x}, {y}) on a logarithmic axis",
                    s.label
                )));
            }
        }
    }
    let finite = || series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let sx = Scale::fit(finite().map(|p| p.0), axes.x_log);
    let sy = Scale::fit(finite().map(|p| p.1), axes.y_log);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |x: f64| LEFT + sx.unit(x) * pw;
    let py = |y: f64| TOP + (1.0 - sy.unit(y)) * ph;

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&axes.title)
    )
    .unwrap();
    writeln!(out, r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##).unwrap();

    for t in sx.ticks() {
        let x = px(t);
        writeln!(out, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP + ph).unwrap();
        writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            TOP + ph + 16.0,
            label(t)
        )
        .unwrap();
    }
    for t in sy.ticks() {
        let y = py(t);
        writeln!(out, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##, LEFT + pw).unwrap();
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            label(t)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 16.0,
        escape(&axes.x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="18" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {:.1})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&axes.y_label)
    )
    .unwrap();

    for (k, s) in series.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                runs.last_mut().unwrap().push((px(x), py(y)));
            } else if !runs.last().unwrap().is_empty() {
                runs.push(Vec::new());
            }
        }
        for run in runs.iter().filter(|r| !r.is_empty()) {
            let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            writeln!(
                out,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            )
            .unwrap();
        }
        let ly = TOP + 16.0 + 16.0 * k as f64;
        let lx = LEFT + pw - 150.0;
        writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{colour}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 20.0,
            ly - 4.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.1}" y="{ly:.1}" font-family="sans-serif" font-size="11">{}</text>"#,
            lx + 26.0,
            escape(&s.label)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_line_gives_one_polyline() {
        let svg = emit_svg(&[Series::new("a", vec![(0.0, 0.0), (1.0, 1.0)])], &Axes::default()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(emit_svg(&[], &Axes::default()), Err(Error::EmptySeries)));
        assert!(matches!(
            emit_svg(&[Series::new("a", vec![])], &Axes::default()),
            Err(Error::EmptySeries)
        ));
    }

    #[test]
    fn log_axis_rejects_nonpositive() {
        let axes = Axes {
            x_log: true,
            ..Axes::default()
        };
        assert!(matches!(
            emit_svg(&[Series::new("a", vec![(0.0, 1.0), (1.0, 2.0)])], &axes),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn deterministic_and_gaps_split_lines() {
        let s = [Series::new("a & b", vec![(1.0, 1.0), (2.0, f64::NAN), (3.0, 2.0), (4.0, 3.0)])];
        let axes = Axes {
            title: "t".into(),
            x_log: true,
            y_log: true,
            ..Axes::default()
        };
        let a = emit_svg(&s, &axes).unwrap();
        assert_eq!(a, emit_svg(&s, &axes).unwrap());
        assert_eq!(a.matches("<polyline").count(), 2);
        assert!(a.contains("a &amp; b"));
    }

    #[test]
    fn constant_series_still_renders() {
        let svg = emit_svg(&[Series::new("c", vec![(1.0, 5.0), (2.0, 5.0)])], &Axes::default()).unwrap();
        assert!(!svg.contains("NaN"));
    }
}
