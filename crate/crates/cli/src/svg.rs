//! Minimal deterministic SVG charts.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;

pub struct Scatter<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
    /// Per-point values mapped to a color ramp.
    pub color: Option<&'a [f64]>,
    /// Draw the line `y = x`.
    pub diagonal: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let (lo, hi) =
        v.iter().filter(|x| x.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

/// Blue to red.
fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (40.0 + 200.0 * t).round() as u8;
    let b = (220.0 - 190.0 * t).round() as u8;
    format!("#{r:02x}50{b:02x}")
}

fn header(out: &mut String, title: &str, config: &str) {
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(out, "<!-- config: {} -->", config.replace("--", "- -"));
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        W / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, x_label: &str, y_label: &str, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) {
    let _ = writeln!(
        out,
        r#"<path d="M{MARGIN} {top} V{bottom} H{right}" stroke="black" fill="none"/>"#,
        top = MARGIN,
        bottom = H - MARGIN,
        right = W - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        W / 2.0,
        H - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 18 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    for (v, x, anchor) in [(x0, MARGIN, "start"), (x1, W - MARGIN, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{}" text-anchor="{anchor}" font-family="sans-serif" font-size="10">{v:.3}</text>"#,
            H - MARGIN + 14.0
        );
    }
    for (v, y) in [(y0, H - MARGIN), (y1, MARGIN + 10.0)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{y}" text-anchor="end" font-family="sans-serif" font-size="10">{v:.3}</text>"#,
            MARGIN - 4.0
        );
    }
}

fn map(v: f64, (lo, hi): (f64, f64), a: f64, b: f64) -> f64 {
    a + (v - lo) / (hi - lo) * (b - a)
}

pub fn scatter(s: &Scatter<'_>, config: &str) -> String {
    let mut out = String::new();
    header(&mut out, s.title, config);
    let (mut xb, mut yb) = (bounds(s.x), bounds(s.y));
    if s.diagonal {
        let lo = xb.0.min(yb.0);
        let hi = xb.1.max(yb.1);
        xb = (lo, hi);
        yb = (lo, hi);
    }
    axes(&mut out, s.x_label, s.y_label, xb, yb);
    if s.diagonal {
        let _ = writeln!(
            out,
            r#"<line x1="{MARGIN}" y1="{}" x2="{}" y2="{MARGIN}" stroke="gray" stroke-dasharray="4 3"/>"#,
            H - MARGIN,
            W - MARGIN
        );
    }
    let cb = s.color.map(bounds);
    for i in 0..s.x.len() {
        let px = map(s.x[i], xb, MARGIN, W - MARGIN);
        let py = map(s.y[i], yb, H - MARGIN, MARGIN);
        let fill = match (s.color, cb) {
            (Some(c), Some(b)) => ramp((c[i] - b.0) / (b.1 - b.0)),
            _ => "#3060c0".to_string(),
        };
        let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="2.5" fill="{fill}" fill-opacity="0.7"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

/// Histogram; integer-valued data gets one bin per integer.
pub fn histogram(title: &str, x_label: &str, values: &[f64], config: &str) -> String {
    let mut out = String::new();
    header(&mut out, title, config);
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let integral = finite.iter().all(|v| v.fract() == 0.0);
    let (lo, hi) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
    let (start, width, bins) = if integral {
        (lo - 0.5, 1.0, (hi - lo) as usize + 1)
    } else {
        let bins = 30usize;
        let w = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
        (lo, w, bins)
    };
    let mut counts = vec![0usize; bins.max(1)];
    for v in &finite {
        let b = (((v - start) / width).floor() as usize).min(counts.len() - 1);
        counts[b] += 1;
    }
    let max = counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let xb = (start, start + width * counts.len() as f64);
    axes(&mut out, x_label, "count", xb, (0.0, max));
    let bar_w = (W - 2.0 * MARGIN) / counts.len() as f64;
    for (i, &c) in counts.iter().enumerate() {
        let h = c as f64 / max * (H - 2.0 * MARGIN);
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="#3060c0" stroke="white" stroke-width="0.5"/>"##,
            MARGIN + i as f64 * bar_w,
            H - MARGIN - h,
            bar_w
        );
    }
    out.push_str("</svg>\n");
    out
}
