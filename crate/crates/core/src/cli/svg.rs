//! Minimal SVG line plots: axes, optional log scales, legend and vertical
//! markers. Points that cannot be drawn (non-finite, or nonpositive on a log
//! axis) break the line.

use std::fmt::Write;

const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 260.0;
const MARGIN_L: f64 = 62.0;
const MARGIN_R: f64 = 14.0;
const MARGIN_T: f64 = 26.0;
const MARGIN_B: f64 = 42.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
    /// Palette slot; defaults to the series position.
    pub color: Option<usize>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series {
            label: label.into(),
            points,
            dashed: false,
            color: None,
        }
    }

    pub fn colored(mut self, slot: usize) -> Self {
        self.color = Some(slot);
        self
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_log: bool,
    pub y_log: bool,
    pub series: Vec<Series>,
    /// Vertical lines at the given x positions.
    pub markers: Vec<(f64, String)>,
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| usable(*v, log)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0, log };
        }
        if log {
            lo = lo.floor();
            hi = hi.ceil();
        }
        if hi - lo < 1e-12 * (1.0 + lo.abs()) {
            lo -= 0.5;
            hi += 0.5;
        }
        Axis { lo, hi, log }
    }

    /// Position in [0, 1].
    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let span = (self.hi - self.lo) as i64;
            let step = ((span + 7) / 8).max(1);
            let mut out = Vec::new();
            let mut e = self.lo as i64;
            while e as f64 <= self.hi {
                out.push((10f64.powi(e as i32), format!("1e{e}")));
                e += step;
            }
            return out;
        }
        let raw = (self.hi - self.lo) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let mut out = Vec::new();
        let mut v = (self.lo / step).ceil() * step;
        while v <= self.hi + 1e-9 * step {
            let label = format!("{}", (v / step).round() * step);
            out.push((v, trim_float(&label)));
            v += step;
        }
        out
    }
}

fn usable(v: f64, log: bool) -> bool {
    v.is_finite() && (!log || v > 0.0)
}

fn trim_float(s: &str) -> String {
    match s.parse::<f64>() {
        Ok(x) if x.abs() >= 1e-4 || x == 0.0 => {
            let r = format!("{:.4}", x);
            r.trim_end_matches('0').trim_end_matches('.').to_string()
        }
        Ok(x) => format!("{x:.1e}"),
        Err(_) => s.to_string(),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn render_panel(out: &mut String, panel: &Panel, ox: f64, oy: f64) {
    let xs = Axis::fit(
        panel
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.0))
            .chain(panel.markers.iter().map(|m| m.0)),
        panel.x_log,
    );
    let ys = Axis::fit(panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)), panel.y_log);
    let pw = PANEL_W - MARGIN_L - MARGIN_R;
    let ph = PANEL_H - MARGIN_T - MARGIN_B;
    let x0 = ox + MARGIN_L;
    let y0 = oy + MARGIN_T;
    let px = |x: f64| x0 + xs.frac(x) * pw;
    let py = |y: f64| y0 + (1.0 - ys.frac(y)) * ph;

    let _ = writeln!(
        out,
        r#"<rect x="{x0:.1}" y="{y0:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
        x0 + pw / 2.0,
        oy + 16.0,
        escape(&panel.title)
    );
    for (v, label) in xs.ticks() {
        let x = px(v);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="9">{label}</text>"#,
            y0 + ph,
            y0 + ph + 4.0,
            y0 + ph + 14.0
        );
    }
    for (v, label) in ys.ticks() {
        let y = py(v);
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{x0:.1}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="9">{label}</text>"#,
            x0 - 4.0,
            x0 - 6.0,
            y + 3.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
        x0 + pw / 2.0,
        oy + PANEL_H - 8.0,
        escape(&panel.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
        ox + 14.0,
        y0 + ph / 2.0,
        ox + 14.0,
        y0 + ph / 2.0,
        escape(&panel.y_label)
    );
    for (v, label) in &panel.markers {
        if !usable(*v, xs.log) {
            continue;
        }
        let x = px(*v);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.1}" y1="{y0:.1}" x2="{x:.1}" y2="{:.1}" stroke="#444" stroke-dasharray="2,3"/><text x="{:.1}" y="{:.1}" font-size="9">{}</text>"##,
            y0 + ph,
            x + 2.0,
            y0 + 10.0,
            escape(label)
        );
    }
    let mut legend_row = 0;
    for (k, s) in panel.series.iter().enumerate() {
        let color = PALETTE[s.color.unwrap_or(k) % PALETTE.len()];
        let dash = if s.dashed { r#" stroke-dasharray="5,3""# } else { "" };
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for &(x, y) in &s.points {
            if usable(x, xs.log) && usable(y, ys.log) {
                segments.last_mut().unwrap().push((px(x), py(y)));
            } else if !segments.last().unwrap().is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.2"{dash} points="{}"/>"#,
                pts.join(" ")
            );
        }
        if s.label.is_empty() {
            continue;
        }
        let ly = y0 + 12.0 + 11.0 * legend_row as f64;
        legend_row += 1;
        let lx = x0 + pw - 92.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{:.1}" y="{ly:.1}" font-size="9">{}</text>"#,
            ly - 3.0,
            lx + 14.0,
            ly - 3.0,
            lx + 17.0,
            escape(&s.label)
        );
    }
}

/// Lays the panels out row-major with `cols` panels per row.
pub fn render(panels: &[Panel], cols: usize) -> String {
    let cols = cols.max(1);
    let rows = panels.len().div_ceil(cols).max(1);
    let w = PANEL_W * cols as f64;
    let h = PANEL_H * rows as f64;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for (k, panel) in panels.iter().enumerate() {
        let ox = PANEL_W * (k % cols) as f64;
        let oy = PANEL_H * (k / cols) as f64;
        render_panel(&mut out, panel, ox, oy);
    }
    out.push_str("</svg>\n");
    out
}
