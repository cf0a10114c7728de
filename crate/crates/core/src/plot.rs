//! Minimal SVG line plots.

use std::fmt::Write;

use crate::geometry::Vec3;
use crate::inverse::ReconstructedOrbit;
use crate::metrics::NoiseSweepResult;

const PANEL: f64 = 300.0;
const MARGIN: f64 = 40.0;
const TRUE_COLOR: &str = "#d62728";
const RECON_COLOR: &str = "#1f77b4";

/// Linear map from a data box onto one square panel.
struct Panel {
    x0: f64,
    lo: (f64, f64),
    span: (f64, f64),
}

impl Panel {
    fn new(x0: f64, xs: impl Iterator<Item = (f64, f64)> + Clone) -> Self {
        let fold = |f: fn(f64, f64) -> f64, init, pick: fn(&(f64, f64)) -> f64| {
            xs.clone().map(|p| pick(&p)).filter(|v| v.is_finite()).fold(init, f)
        };
        let (xmin, xmax) = (fold(f64::min, f64::INFINITY, |p| p.0), fold(f64::max, f64::NEG_INFINITY, |p| p.0));
        let (ymin, ymax) = (fold(f64::min, f64::INFINITY, |p| p.1), fold(f64::max, f64::NEG_INFINITY, |p| p.1));
        let widen = |lo: f64, hi: f64| {
            if !(lo.is_finite() && hi.is_finite()) {
                (0.0, 1.0)
            } else if hi - lo <= 1e-12 * hi.abs().max(1.0) {
                (lo - 0.5, 1.0)
            } else {
                (lo, hi - lo)
            }
        };
        let (xl, xs_) = widen(xmin, xmax);
        let (yl, ys_) = widen(ymin, ymax);
        Panel {
            x0,
            lo: (xl, yl),
            span: (xs_, ys_),
        }
    }

    fn px(&self, p: (f64, f64)) -> (f64, f64) {
        let u = (p.0 - self.lo.0) / self.span.0;
        let v = (p.1 - self.lo.1) / self.span.1;
        (self.x0 + MARGIN + u * PANEL, MARGIN + (1.0 - v) * PANEL)
    }

    fn polyline(&self, out: &mut String, pts: impl Iterator<Item = (f64, f64)>, color: &str) {
        let coords: Vec<String> = pts
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|p| {
                let (x, y) = self.px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
    }

    fn frame(&self, out: &mut String, xlabel: &str, ylabel: &str) {
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{MARGIN}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#888"/>"##,
            self.x0 + MARGIN
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{xlabel} [{:.3e}, {:.3e}]</text>"#,
            self.x0 + MARGIN + PANEL / 2.0,
            MARGIN + PANEL + 18.0,
            self.lo.0,
            self.lo.0 + self.span.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 {0} {1})">{ylabel} [{:.3e}, {:.3e}]</text>"#,
            self.x0 + MARGIN - 8.0,
            MARGIN + PANEL / 2.0,
            self.lo.1,
            self.lo.1 + self.span.1
        );
    }
}

fn header(width: f64, height: f64, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" font-size="14" text-anchor="middle">{}</text>"#, width / 2.0, escape(title));
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Three coordinate-plane projections; true orbit red, reconstruction blue.
pub fn orbit_svg(truth: &ReconstructedOrbit, recon: &ReconstructedOrbit, title: &str) -> String {
    let planes = [(0, 1, "a1", "a2"), (0, 2, "a1", "a3"), (1, 2, "a2", "a3")];
    let width = 3.0 * (PANEL + 2.0 * MARGIN);
    let mut out = header(width, PANEL + 2.0 * MARGIN + 10.0, title);
    let proj = |pts: &[Vec3], i: usize, j: usize| pts.iter().map(move |p| (p[i], p[j])).collect::<Vec<_>>();
    for (k, (i, j, xl, yl)) in planes.into_iter().enumerate() {
        let t = proj(&truth.points, i, j);
        let r = proj(&recon.points, i, j);
        let panel = Panel::new(k as f64 * (PANEL + 2.0 * MARGIN), t.iter().chain(&r).copied());
        panel.frame(&mut out, xl, yl);
        panel.polyline(&mut out, t.into_iter(), TRUE_COLOR);
        panel.polyline(&mut out, r.into_iter(), RECON_COLOR);
    }
    out.push_str("</svg>\n");
    out
}

/// Mean error per noise level with the fitted line.
pub fn sweep_svg(r: &NoiseSweepResult, title: &str) -> String {
    let width = PANEL + 2.0 * MARGIN;
    let mut out = header(width, PANEL + 2.0 * MARGIN + 10.0, title);
    let pts: Vec<(f64, f64)> = r.points.iter().map(|p| (p.epsilon, p.err)).collect();
    let emax = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    let fit = [(0.0, r.intercept), (emax, r.slope * emax + r.intercept)];
    let panel = Panel::new(0.0, pts.iter().chain(&fit).copied());
    panel.frame(&mut out, "epsilon", "Err");
    panel.polyline(&mut out, fit.into_iter(), TRUE_COLOR);
    for p in &pts {
        let (x, y) = panel.px(*p);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{RECON_COLOR}"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TimeGrid;
    use crate::metrics::SweepPoint;

    #[test]
    fn orbit_plot_has_six_polylines() {
        let grid = TimeGrid::new(0.0, 0.1, 20).unwrap();
        let o = ReconstructedOrbit {
            grid,
            points: grid.times().map(|t| Vec3::new(t.cos(), t.sin(), t)).collect(),
        };
        let svg = orbit_svg(&o, &o, "a < b");
        assert_eq!(svg.matches("<polyline").count(), 6);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn sweep_plot_handles_flat_data() {
        let r = NoiseSweepResult {
            points: vec![
                SweepPoint { epsilon: 0.0, err: 0.1, runs: 1 },
                SweepPoint { epsilon: 0.0, err: 0.1, runs: 1 },
            ],
            runs: vec![],
            failures: vec![],
            slope: 0.0,
            intercept: 0.1,
            max_relative_residual: 0.0,
        };
        let svg = sweep_svg(&r, "flat");
        assert!(!svg.contains("NaN"));
        assert_eq!(svg.matches("<circle").count(), 2);
    }
}
