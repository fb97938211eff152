//! Minimal SVG emitters for histograms, density curves and forest plots.

use std::fmt::Write;

use crate::metaanalysis::ForestRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// A labelled curve.
#[derive(Debug, Clone, PartialEq)]
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

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    width: f64,
    height: f64,
    left: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let (x1, y1) = (
            if x1 > x0 { x1 } else { x0 + 1.0 },
            if y1 > y0 { y1 } else { y0 + 1.0 },
        );
        Self {
            x0,
            x1,
            y0,
            y1,
            width: WIDTH,
            height: HEIGHT,
            left: LEFT,
        }
    }

    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * (self.width - self.left - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        self.height - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (self.height - TOP - BOTTOM)
    }

    fn open(&self, out: &mut String, title: &str) {
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            self.width / 2.0,
            escape(title)
        );
    }

    fn x_axis(&self, out: &mut String, label: &str) {
        let y = self.height - BOTTOM;
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black"/>"#,
            self.left,
            self.width - RIGHT
        );
        for t in ticks(self.x0, self.x1) {
            let x = self.px(t);
            let _ = writeln!(
                out,
                r#"<line x1="{x:.1}" y1="{y:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#,
                y + 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                y + 18.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            (self.left + self.width - RIGHT) / 2.0,
            self.height - 12.0,
            escape(label)
        );
    }

    fn y_axis(&self, out: &mut String) {
        let _ = writeln!(
            out,
            r#"<line x1="{l:.1}" y1="{:.1}" x2="{l:.1}" y2="{:.1}" stroke="black"/>"#,
            TOP,
            self.height - BOTTOM,
            l = self.left
        );
        for t in ticks(self.y0, self.y1) {
            let y = self.py(t);
            let _ = writeln!(
                out,
                r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black"/>"#,
                self.left - 5.0,
                self.left
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                self.left - 8.0,
                y + 4.0,
                tick_label(t)
            );
        }
    }

    fn polyline(&self, out: &mut String, pts: &[(f64, f64)], color: &str) {
        let coords: Vec<String> = pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite() && *x >= self.x0 && *x <= self.x1)
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y.min(self.y1))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
    }

    fn legend(&self, out: &mut String, labels: &[(&str, &str)]) {
        for (i, (label, color)) in labels.iter().enumerate() {
            let y = TOP + 8.0 + 16.0 * i as f64;
            let x = self.width - RIGHT - 180.0;
            let _ = writeln!(
                out,
                r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"/>"#,
                x + 20.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
                x + 26.0,
                y + 4.0,
                escape(label)
            );
        }
    }
}

/// Density-scaled histogram of `values` with optional density overlays.
/// The x range runs from 0 (or the minimum, if negative) to `x_max`.
pub fn histogram(
    title: &str,
    xlabel: &str,
    values: &[f64],
    bins: usize,
    x_max: f64,
    overlays: &[Series],
) -> String {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let x0 = finite.iter().copied().fold(0.0_f64, f64::min);
    let x1 = if x_max > x0 { x_max } else { x0 + 1.0 };
    let bins = bins.max(1);
    let h = (x1 - x0) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in &finite {
        if v <= x1 {
            counts[(((v - x0) / h) as usize).min(bins - 1)] += 1;
        }
    }
    let n = finite.len().max(1) as f64;
    let heights: Vec<f64> = counts.iter().map(|&c| c as f64 / (n * h)).collect();
    let y1 = overlays
        .iter()
        .flat_map(|s| {
            s.points
                .iter()
                .filter(|p| p.0 >= x0 && p.0 <= x1)
                .map(|p| p.1)
        })
        .chain(heights.iter().copied())
        .filter(|y| y.is_finite())
        .fold(0.0, f64::max)
        * 1.05;
    let f = Frame::new(x0, x1, 0.0, y1);
    let mut out = String::new();
    f.open(&mut out, title);
    for (i, &d) in heights.iter().enumerate() {
        let (a, b) = (f.px(x0 + i as f64 * h), f.px(x0 + (i + 1) as f64 * h));
        let top = f.py(d);
        let _ = writeln!(
            out,
            r##"<rect x="{a:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="#cccccc" stroke="#888888" stroke-width="0.5"/>"##,
            b - a,
            f.py(0.0) - top
        );
    }
    let mut legend = Vec::new();
    for (i, s) in overlays.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        f.polyline(&mut out, &s.points, color);
        legend.push((s.label.as_str(), color));
    }
    f.x_axis(&mut out, xlabel);
    f.y_axis(&mut out);
    f.legend(&mut out, &legend);
    out.push_str("</svg>\n");
    out
}

/// Curves on shared axes, clipped to `[x_min, x_max]`.
pub fn line_plot(title: &str, xlabel: &str, series: &[Series], x_min: f64, x_max: f64) -> String {
    let y1 = series
        .iter()
        .flat_map(|s| {
            s.points
                .iter()
                .filter(|p| p.0 >= x_min && p.0 <= x_max)
                .map(|p| p.1)
        })
        .filter(|y| y.is_finite())
        .fold(0.0, f64::max)
        * 1.05;
    let f = Frame::new(x_min, x_max, 0.0, y1);
    let mut out = String::new();
    f.open(&mut out, title);
    let mut legend = Vec::new();
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        f.polyline(&mut out, &s.points, color);
        legend.push((s.label.as_str(), color));
    }
    f.x_axis(&mut out, xlabel);
    f.y_axis(&mut out);
    f.legend(&mut out, &legend);
    out.push_str("</svg>\n");
    out
}

/// Forest plot: one interval per row, labels on the left, a dashed line at 0.
pub fn forest_plot(title: &str, xlabel: &str, rows: &[ForestRow]) -> String {
    let lo = rows
        .iter()
        .map(|r| r.lo)
        .filter(|v| v.is_finite())
        .fold(0.0_f64, f64::min);
    let hi = rows
        .iter()
        .map(|r| r.hi)
        .filter(|v| v.is_finite())
        .fold(0.0_f64, f64::max);
    let pad = 0.05 * (hi - lo).max(1e-9);
    let row_h = 22.0;
    let mut f = Frame::new(lo - pad, hi + pad, 0.0, rows.len().max(1) as f64);
    f.left = 200.0;
    f.width = 760.0;
    f.height = TOP + BOTTOM + row_h * rows.len().max(1) as f64;
    let mut out = String::new();
    f.open(&mut out, title);
    let zero = f.px(0.0);
    let _ = writeln!(
        out,
        r#"<line x1="{zero:.1}" y1="{TOP:.1}" x2="{zero:.1}" y2="{:.1}" stroke="gray" stroke-dasharray="4,4"/>"#,
        f.height - BOTTOM
    );
    for (i, r) in rows.iter().enumerate() {
        let y = f.py(rows.len() as f64 - i as f64 - 0.5);
        let color = match r.kind.as_str() {
            "study" => "black",
            "prior" => COLORS[2],
            "posterior" => COLORS[1],
            _ => COLORS[0],
        };
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            f.left - 10.0,
            y + 4.0,
            escape(&r.label)
        );
        if r.lo.is_finite() && r.hi.is_finite() {
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="1.5"/>"#,
                f.px(r.lo),
                f.px(r.hi)
            );
        }
        if r.estimate.is_finite() {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="6" height="6" fill="{color}"/>"#,
                f.px(r.estimate) - 3.0,
                y - 3.0
            );
        }
    }
    f.x_axis(&mut out, xlabel);
    out.push_str("</svg>\n");
    out
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0 && span.is_finite()) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(t: f64) -> String {
    let s = format!("{t:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round() {
        assert_eq!(
            ticks(0.0, 1.0),
            vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]
        );
        assert_eq!(tick_label(0.6000000000000001), "0.6");
        assert_eq!(ticks(-3.0, 3.0), vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        assert_eq!(ticks(0.0, 7.0), vec![0.0, 2.0, 4.0, 6.0]);
    }

    #[test]
    fn histogram_is_well_formed() {
        let svg = histogram(
            "t<1>",
            "tau",
            &[0.1, 0.2, 0.25, 5.0],
            4,
            1.0,
            &[Series::new("fit", vec![(0.0, 1.0), (1.0, 0.0)])],
        );
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<rect ").count(), 5);
        assert!(svg.contains("t&lt;1&gt;"));
    }

    #[test]
    fn forest_has_one_label_per_row() {
        let rows: Vec<ForestRow> = (0..3)
            .map(|i| ForestRow {
                label: format!("row {i}"),
                estimate: i as f64,
                lo: i as f64 - 1.0,
                hi: i as f64 + 1.0,
                kind: "study".into(),
            })
            .collect();
        let svg = forest_plot("f", "effect", &rows);
        for i in 0..3 {
            assert!(svg.contains(&format!(">row {i}<")));
        }
    }
}
