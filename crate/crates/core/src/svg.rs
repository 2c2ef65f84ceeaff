//! Deterministic SVG line charts for item curves.
//!
//! Series are drawn inside a group whose transform maps data coordinates to
//! the plot area, so every `points` attribute holds (θ, value) pairs as
//! computed, rounded to six decimals. Each polyline carries its series label
//! in a `data-item` attribute.

use std::fmt::Write as _;

use crate::rasch::CurveTable;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 140.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 52.0;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#393b79", "#ad494a",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Fixed y range; when absent it spans 0 to the largest value.
    pub y_range: Option<(f64, f64)>,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Icc,
    Iic,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::Icc => "icc",
            CurveKind::Iic => "iic",
        }
    }
}

/// One line per item of `table` whose label passes `keep`.
pub fn curve_chart(table: &CurveTable, kind: CurveKind, title: &str, keep: impl Fn(&str) -> bool) -> LineChart {
    let series = table
        .items
        .iter()
        .filter(|c| keep(&c.label))
        .map(|c| {
            let ys = match kind {
                CurveKind::Icc => &c.icc,
                CurveKind::Iic => &c.iic,
            };
            Series {
                label: c.label.clone(),
                points: table.theta_grid.iter().copied().zip(ys.iter().copied()).collect(),
            }
        })
        .collect();
    let (y_label, y_range) = match kind {
        CurveKind::Icc => ("P(positive)", Some((0.0, 1.0))),
        CurveKind::Iic => ("information", Some((0.0, 0.25))),
    };
    LineChart {
        title: title.to_string(),
        x_label: "θ".to_string(),
        y_label: y_label.to_string(),
        y_range,
        series,
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Tick positions at a 1, 2 or 5 × 10^k spacing giving about five ticks.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.2}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn data_range(chart: &LineChart) -> ((f64, f64), (f64, f64)) {
    let pts = chart.series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() || x0 >= x1 {
        (x0, x1) = if x0.is_finite() {
            (x0 - 1.0, x0 + 1.0)
        } else {
            (0.0, 1.0)
        };
    }
    let y = chart.y_range.unwrap_or((0.0, if y1 > 0.0 { y1 } else { 1.0 }));
    ((x0, x1), y)
}

pub fn render(chart: &LineChart) -> String {
    let ((x0, x1), (y0, y1)) = data_range(chart);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let sx = pw / (x1 - x0);
    let sy = ph / (y1 - y0);
    let px = |x: f64| LEFT + (x - x0) * sx;
    let py = |y: f64| TOP + ph - (y - y0) * sy;

    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&chart.title)
    );

    // axes, grid and tick labels
    let _ = writeln!(w, r##"<g class="axes" stroke="#444" fill="none">"##);
    let _ = writeln!(w, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/>"#);
    for t in ticks(x0, x1) {
        let x = px(t);
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}"/>"#,
            TOP + ph,
            TOP + ph + 5.0
        );
    }
    for t in ticks(y0, y1) {
        let y = py(t);
        let _ = writeln!(w, r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}"/>"#, LEFT - 5.0);
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, r##"<g class="tick-labels" fill="#222">"##);
    for t in ticks(x0, x1) {
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            px(t),
            TOP + ph + 19.0,
            tick_label(t)
        );
    }
    for t in ticks(y0, y1) {
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{:.2}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            LEFT - 8.0,
            py(t),
            tick_label(t)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&chart.y_label)
    );
    let _ = writeln!(w, "</g>");

    // series in data coordinates: x' = LEFT + (x - x0)·sx, y' = TOP + ph - (y - y0)·sy
    let _ = writeln!(
        w,
        r#"<g class="series" data-x-range="{x0} {x1}" data-y-range="{y0} {y1}" transform="matrix({sx} 0 0 {} {} {})" fill="none" stroke-width="1.6">"#,
        -sy,
        LEFT - x0 * sx,
        TOP + ph + y0 * sy
    );
    for (k, s) in chart.series.iter().enumerate() {
        let pts: Vec<String> = s.points.iter().map(|(x, y)| format!("{x:.6},{y:.6}")).collect();
        let _ = writeln!(
            w,
            r#"<polyline data-item="{}" stroke="{}" vector-effect="non-scaling-stroke" points="{}"/>"#,
            escape(&s.label),
            PALETTE[k % PALETTE.len()],
            pts.join(" ")
        );
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g class="legend">"#);
    for (k, s) in chart.series.iter().enumerate() {
        let y = TOP + 8.0 + 18.0 * k as f64;
        let x = WIDTH - RIGHT + 16.0;
        let _ = writeln!(
            w,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="2"/><text x="{}" y="{y}" dominant-baseline="middle">{}</text>"#,
            x + 20.0,
            PALETTE[k % PALETTE.len()],
            x + 26.0,
            escape(&s.label)
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rasch::{curve_table, RaschFit};

    fn table() -> CurveTable {
        let fit = RaschFit::from_parameters(
            vec!["2022-01".into(), "2022-02".into(), "2023-01".into()],
            vec![Some(-1.0), Some(0.5), Some(1.25)],
            vec![Some(0.0)],
        )
        .unwrap();
        curve_table(&fit, -4.0, 4.0, 161).unwrap()
    }

    #[test]
    fn one_polyline_per_kept_item() {
        let chart = curve_chart(&table(), CurveKind::Iic, "IIC 2022", |l| l.starts_with("2022"));
        let svg = render(&chart);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"data-item="2022-02""#));
        assert!(!svg.contains(r#"data-item="2023-01""#));
        assert_eq!(svg, render(&chart));
    }

    #[test]
    fn points_are_in_data_units() {
        let svg = render(&curve_chart(&table(), CurveKind::Icc, "ICC", |_| true));
        let start = svg.find(r#"data-item="2022-01""#).unwrap();
        let pts = &svg[start..];
        let pts = &pts[pts.find("points=\"").unwrap() + 8..];
        let pts = &pts[..pts.find('"').unwrap()];
        let parsed: Vec<(f64, f64)> = pts
            .split(' ')
            .map(|p| {
                let (x, y) = p.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect();
        assert_eq!(parsed.len(), 161);
        assert_eq!(parsed[0].0, -4.0);
        assert_eq!(parsed[60], (-1.0, 0.5));
    }

    #[test]
    fn ticks_and_escaping() {
        assert_eq!(ticks(-4.0, 4.0), [-4.0, -2.0, 0.0, 2.0, 4.0]);
        assert_eq!(ticks(0.0, 0.25).len(), 6);
        assert_eq!(tick_label(0.25), "0.25");
        assert_eq!(tick_label(-2.0), "-2");
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
