//! Three-panel fluctuation plot: histogram, Allan deviation, PSD.

use std::fmt::Write;

use crate::fluct::{AllanResult, PsdResult, ReferenceLines, TraceSummary};

const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 260.0;
const MARGIN: f64 = 45.0;

struct Axes {
    x0: f64,
    x: (f64, f64),
    y: (f64, f64),
    log: bool,
}

impl Axes {
    fn new(x0: f64, xs: &[f64], ys: &[f64], log: bool) -> Self {
        let tr = |v: f64| if log { v.log10() } else { v };
        let finite = |vs: &[f64]| {
            vs.iter()
                .copied()
                .filter(|v| v.is_finite() && (!log || *v > 0.0))
                .map(tr)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
        };
        let pad = |(a, b): (f64, f64)| {
            if !a.is_finite() {
                (0.0, 1.0)
            } else if b > a {
                (a, b)
            } else {
                (a - 0.5, b + 0.5)
            }
        };
        Self {
            x0,
            x: pad(finite(xs)),
            y: pad(finite(ys)),
            log,
        }
    }

    fn map(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        if self.log && (x <= 0.0 || y <= 0.0) || !x.is_finite() || !y.is_finite() {
            return None;
        }
        let (x, y) = if self.log { (x.log10(), y.log10()) } else { (x, y) };
        let px = self.x0 + MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (PANEL_W - 2.0 * MARGIN);
        let py = PANEL_H - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (PANEL_H - 2.0 * MARGIN);
        Some((px, py.clamp(0.0, PANEL_H)))
    }

    fn polyline(&self, svg: &mut String, xs: &[f64], ys: &[f64], style: &str) {
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter_map(|(&x, &y)| self.map(x, y))
            .map(|(a, b)| format!("{a:.2},{b:.2}"))
            .collect();
        let _ = writeln!(svg, r#"<polyline fill="none" {style} points="{}"/>"#, pts.join(" "));
    }

    fn frame(&self, svg: &mut String, title: &str, xlabel: &str, ylabel: &str) {
        let (l, t) = (self.x0 + MARGIN, MARGIN);
        let (w, h) = (PANEL_W - 2.0 * MARGIN, PANEL_H - 2.0 * MARGIN);
        let _ = writeln!(svg, r#"<rect x="{l}" y="{t}" width="{w}" height="{h}" fill="none" stroke="black"/>"#);
        let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle">{title}</text>"#, l + w / 2.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle" font-size="11">{xlabel}</text>"#, l + w / 2.0, PANEL_H - 10.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="11" transform="rotate(-90 {0} {1})" text-anchor="middle">{ylabel}</text>"#, self.x0 + 14.0, t + h / 2.0);
        let fmt = |v: f64| if self.log { format!("1e{v:.1}") } else { format!("{v:.3}") };
        let _ = writeln!(svg, r#"<text x="{l}" y="{}" font-size="9">{}</text>"#, t + h + 12.0, fmt(self.x.0));
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="9" text-anchor="end">{}</text>"#, l + w, t + h + 12.0, fmt(self.x.1));
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="9" text-anchor="end">{}</text>"#, l - 2.0, t + h, fmt(self.y.0));
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="9" text-anchor="end">{}</text>"#, l - 2.0, t + 8.0, fmt(self.y.1));
    }
}

pub fn fluctuation_svg(
    label: &str,
    summary: &TraceSummary,
    allan: &AllanResult,
    psd: &PsdResult,
    lines: Option<&ReferenceLines>,
) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{PANEL_H}" font-family="sans-serif" font-size="12">"#,
        3.0 * PANEL_W
    );
    let _ = writeln!(svg, "<!-- {label} -->");

    let h = &summary.histogram;
    let counts: Vec<f64> = h.counts.iter().map(|&c| c as f64).collect();
    let overlay = summary.gaussian_overlay();
    let mut ys = counts.clone();
    ys.extend(&overlay);
    ys.push(0.0);
    let ax = Axes::new(0.0, &h.edges, &ys, false);
    for (i, &c) in counts.iter().enumerate() {
        if let (Some((x1, y1)), Some((x2, y2))) = (ax.map(h.edges[i], c), ax.map(h.edges[i + 1], 0.0)) {
            let _ = writeln!(
                svg,
                r#"<rect x="{x1:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="steelblue" opacity="0.6"/>"#,
                x2 - x1,
                y2 - y1
            );
        }
    }
    let centres: Vec<f64> = h.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect();
    ax.polyline(&mut svg, &centres, &overlay, r#"stroke="crimson""#);
    ax.frame(&mut svg, "Histogram", "value (us)", "count");

    let mut ys = allan.adev.clone();
    let white_adev = lines.map(|l| l.white_adev(&allan.taus));
    if let Some(w) = &white_adev {
        ys.extend(w);
    }
    let ax = Axes::new(PANEL_W, &allan.taus, &ys, true);
    ax.polyline(&mut svg, &allan.taus, &allan.adev, r#"stroke="black""#);
    if let Some(w) = &white_adev {
        ax.polyline(&mut svg, &allan.taus, w, r#"stroke="gray" stroke-dasharray="4 3""#);
    }
    ax.frame(&mut svg, "Allan deviation", "tau (s)", "ADEV (us)");

    let ax = Axes::new(2.0 * PANEL_W, &psd.freqs, &psd.psd, true);
    ax.polyline(&mut svg, &psd.freqs, &psd.psd, r#"stroke="black""#);
    if let Some(l) = lines {
        ax.polyline(&mut svg, &psd.freqs, &l.one_over_f, r#"stroke="crimson" stroke-dasharray="4 3""#);
        ax.polyline(&mut svg, &psd.freqs, &l.white_psd, r#"stroke="gray" stroke-dasharray="4 3""#);
    }
    ax.frame(&mut svg, "PSD", "f (Hz)", "PSD (us^2/Hz)");
    svg.push_str("</svg>\n");
    svg
}
