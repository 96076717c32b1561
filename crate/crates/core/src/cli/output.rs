//! CSV rows and hand-emitted SVG line plots.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Solution,
    Profile,
    Error,
}

impl ValueKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueKind::Solution => "solution",
            ValueKind::Profile => "profile",
            ValueKind::Error => "error",
        }
    }
}

/// Row of `series.csv`. `experiment` may carry a `/curve` suffix to tell
/// curves of the same kind apart.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub experiment: String,
    pub t: f64,
    pub y_or_r: Option<f64>,
    pub kind: ValueKind,
    pub value: f64,
}

/// Row of `summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub experiment: String,
    pub metric: String,
    pub value: f64,
    pub tolerance: String,
    pub pass: bool,
}

impl SummaryRow {
    pub fn new(experiment: &str, metric: &str, value: f64, tolerance: impl Into<String>, pass: bool) -> Self {
        SummaryRow {
            experiment: experiment.to_string(),
            metric: metric.to_string(),
            value,
            tolerance: tolerance.into(),
            pass,
        }
    }

    /// A reported quantity without a pass criterion.
    pub fn info(experiment: &str, metric: &str, value: f64) -> Self {
        Self::new(experiment, metric, value, "", true)
    }
}

pub fn write_series(path: &Path, rows: &[SeriesRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["experiment", "t", "y_or_r", "value_kind", "value"])?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.t.to_string(),
            r.y_or_r.map(|x| x.to_string()).unwrap_or_default(),
            r.kind.as_str().to_string(),
            r.value.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["experiment", "metric", "value", "tolerance", "pass"])?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.metric.clone(),
            r.value.to_string(),
            r.tolerance.clone(),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Dashed stroke.
    pub dashed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub curves: Vec<Curve>,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 170.0, 40.0, 55.0); // left, right, top, bottom
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Ticks at "nice" steps for a linear axis.
fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn fmt_tick(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v.round() as i64)
    } else if v == 0.0 || (v.abs() >= 1e-2 && v.abs() < 1e4) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.0e}")
    }
}

impl Plot {
    /// Renders the plot; points that are not finite (or not positive on a
    /// log axis) are dropped.
    pub fn to_svg(&self) -> String {
        let tx = |x: f64| if self.log_x { x.log10() } else { x };
        let ty = |y: f64| if self.log_y { y.log10() } else { y };
        let curves: Vec<Vec<(f64, f64)>> = self
            .curves
            .iter()
            .map(|c| {
                c.points
                    .iter()
                    .filter(|(x, y)| (!self.log_x || *x > 0.0) && (!self.log_y || *y > 0.0))
                    .map(|&(x, y)| (tx(x), ty(y)))
                    .filter(|(x, y)| x.is_finite() && y.is_finite())
                    .collect()
            })
            .collect();
        let all = curves.iter().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 == x0 {
            x1 = x0 + 1.0;
        }
        if y1 == y0 {
            y1 = y0 + 1.0;
        }
        let pad = 0.05 * (y1 - y0);
        let (y0, y1) = (y0 - pad, y1 + pad);
        let (ml, mr, mt, mb) = MARGIN;
        let pw = WIDTH - ml - mr;
        let ph = HEIGHT - mt - mb;
        let sx = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| mt + (y1 - y) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            ml + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        let ticks = |lo: f64, hi: f64, log: bool| {
            if log {
                (lo.ceil() as i64..=hi.floor() as i64).map(|k| k as f64).collect()
            } else {
                linear_ticks(lo, hi)
            }
        };
        for x in ticks(x0, x1, self.log_x) {
            let px = sx(x);
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
                mt + ph,
                mt + ph + 5.0,
                mt + ph + 19.0,
                fmt_tick(x, self.log_x)
            );
        }
        for y in ticks(y0, y1, self.log_y) {
            let py = sy(y);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{py:.2}" x2="{ml}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                ml - 5.0,
                ml - 8.0,
                py + 4.0,
                fmt_tick(y, self.log_y)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            ml + pw / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
            mt + ph / 2.0,
            mt + ph / 2.0,
            escape(&self.y_label)
        );
        for (i, (curve, pts)) in self.curves.iter().zip(&curves).enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let dash = if curve.dashed { r#" stroke-dasharray="6,4""# } else { "" };
            let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.6"{dash} points="{}"/>"#,
                coords.join(" ")
            );
            let ly = mt + 14.0 + 18.0 * i as f64;
            let lx = WIDTH - mr + 12.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
                lx + 24.0,
                lx + 30.0,
                ly + 4.0,
                escape(&curve.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
