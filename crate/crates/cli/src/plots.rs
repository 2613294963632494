//! Self-contained SVG views of study results. Plots carry no tick labels:
//! every number they display is also present in a CSV artifact.

use std::fmt::Write;

use num_complex::Complex64;

use crate::artifact::{num, Artifact, ArtifactKind};

const W: f64 = 640.0;
const H: f64 = 480.0;
const M: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in points.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return Self { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
        }
        let pad = |a: f64, b: f64| {
            let w = (b - a).abs().max(1e-12 * a.abs().max(1.0));
            (a - 0.05 * w, b + 0.05 * w)
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        M + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * M)
    }

    fn py(&self, y: f64) -> f64 {
        H - M - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * M)
    }
}

fn open(title: &str, xlabel: &str, ylabel: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{W}" height="{H}" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="#333333"/>"##,
        W - 2.0 * M,
        H - 2.0 * M
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, M / 2.0, escape(title));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - M / 4.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
        M / 3.0,
        H / 2.0,
        M / 3.0,
        H / 2.0,
        escape(ylabel)
    );
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn close(mut s: String, name: &str, records: usize) -> Artifact {
    s.push_str("</svg>\n");
    Artifact {
        name: name.to_string(),
        kind: ArtifactKind::Svg,
        content: s,
        records,
    }
}

fn polyline(s: &mut String, f: &Frame, pts: &[(f64, f64)], color: &str, dash: bool) {
    if pts.len() < 2 {
        return;
    }
    let coords: Vec<String> = pts
        .iter()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
        .collect();
    let dash = if dash { r#" stroke-dasharray="6 4""# } else { "" };
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
        coords.join(" ")
    );
}

/// Complex-plane scatter of one or more spectra with predicted curves overlaid.
pub fn spectrum_plot(name: &str, series: &[(String, Vec<Complex64>)], curves: &[Vec<Complex64>]) -> Artifact {
    let all = series
        .iter()
        .flat_map(|(_, v)| v.iter())
        .chain(curves.iter().flatten())
        .map(|z| (z.re, z.im));
    let f = Frame::fit(all);
    let mut s = open("spectrum", "Re mu", "Im mu");
    for c in curves {
        let pts: Vec<(f64, f64)> = c.iter().map(|z| (z.re, z.im)).collect();
        polyline(&mut s, &f, &pts, "#777777", true);
    }
    let mut count = 0;
    for (k, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        for z in pts {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{color}"/>"#,
                f.px(z.re),
                f.py(z.im)
            );
            count += 1;
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            M + 8.0,
            M + 18.0 * (k as f64 + 1.0),
            escape(label)
        );
    }
    close(s, name, count)
}

/// `log|ψ|` against `x` with the fitted line over the fit window.
pub fn decay_plot(name: &str, profile: &[(f64, f64)], gamma_hat: f64, log_c: f64, window: (f64, f64)) -> Artifact {
    let f = Frame::fit(profile.iter().copied());
    let mut s = open("eigenvector tail", "x", "log |psi|");
    polyline(&mut s, &f, profile, PALETTE[0], false);
    let line = [(window.0, log_c + gamma_hat * window.0), (window.1, log_c + gamma_hat * window.1)];
    polyline(&mut s, &f, &line, PALETTE[1], true);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" fill="{}">fitted slope {}</text>"#,
        W - M - 220.0,
        M + 18.0,
        PALETTE[1],
        num(gamma_hat)
    );
    close(s, name, profile.len())
}

/// Count staircase `N` against the sweep parameter.
pub fn staircase_plot(name: &str, xlabel: &str, points: &[(f64, usize)]) -> Artifact {
    let f = Frame::fit(points.iter().map(|&(x, n)| (x, n as f64)).chain([(points.first().map_or(0.0, |p| p.0), 0.0)]));
    let mut s = open("eigenvalue count below threshold", xlabel, "N");
    let mut stairs = Vec::with_capacity(2 * points.len());
    for (i, &(x, n)) in points.iter().enumerate() {
        if i > 0 {
            stairs.push((x, points[i - 1].1 as f64));
        }
        stairs.push((x, n as f64));
    }
    polyline(&mut s, &f, &stairs, PALETTE[0], false);
    for &(x, n) in points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
            f.px(x),
            f.py(n as f64),
            PALETTE[0]
        );
    }
    close(s, name, points.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_spectrum_is_valid_markup() {
        let a = spectrum_plot("s.svg", &[], &[]);
        assert!(a.content.starts_with("<svg"));
        assert!(a.content.trim_end().ends_with("</svg>"));
        assert_eq!(a.records, 0);
        assert_eq!(a.content.matches("<svg").count(), 1);
    }

    #[test]
    fn decay_annotation_repeats_the_slope() {
        let prof: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, -1.25 * i as f64)).collect();
        let a = decay_plot("d.svg", &prof, -1.25, 0.0, (0.0, 49.0));
        assert!(a.content.contains("fitted slope -1.25"));
    }

    #[test]
    fn staircase_has_one_marker_per_point() {
        let a = staircase_plot("a.svg", "L", &[(50.0, 0), (100.0, 1), (200.0, 3)]);
        assert_eq!(a.content.matches("<circle").count(), 3);
    }
}
