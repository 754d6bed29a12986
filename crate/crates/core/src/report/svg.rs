use std::fmt::Write as _;

use crate::fit::{FitPoint, PowerLawFit};

const W: f64 = 480.0;
const H: f64 = 360.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 45.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Whole decades covering `[lo, hi]` in log10.
fn decade_range(lo: f64, hi: f64) -> (i32, i32) {
    let a = lo.log10().floor() as i32;
    let mut b = hi.log10().ceil() as i32;
    if b <= a {
        b = a + 1;
    }
    (a, b)
}

/// Log-log scatter of `points` with the fitted line, if any.
pub fn render_svg(title: &str, points: &[FitPoint], fit: Option<&PowerLawFit>) -> String {
    let fold = |f: fn(&FitPoint) -> f64, init: f64, pick: fn(f64, f64) -> f64| {
        points.iter().map(f).fold(init, pick)
    };
    let (x0, x1) = decade_range(
        fold(|p| p.nnz, f64::INFINITY, f64::min),
        fold(|p| p.nnz, 0.0, f64::max),
    );
    let (y0, y1) = decade_range(
        fold(|p| p.seconds, f64::INFINITY, f64::min),
        fold(|p| p.seconds, 0.0, f64::max),
    );
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v.log10() - x0 as f64) / (x1 - x0) as f64 * pw;
    let sy = |v: f64| TOP + ph - (v.log10() - y0 as f64) / (y1 - y0) as f64 * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in x0..=x1 {
        let x = sx(10f64.powi(k));
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{k}</text>"##,
            TOP + ph,
            TOP + ph + 15.0
        );
    }
    for k in y0..=y1 {
        let y = sy(10f64.powi(k));
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{k}</text>"##,
            LEFT + pw,
            LEFT - 5.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">nonzeros</text>"#,
        LEFT + pw / 2.0,
        H - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">seconds</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    for p in points {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#1f77b4" fill-opacity="0.7"/>"##,
            sx(p.nnz),
            sy(p.seconds)
        );
    }
    if let Some(f) = fit {
        let lo = points.iter().map(|p| p.nnz).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p.nnz).fold(0.0, f64::max);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#d62728" stroke-width="1.5"/>"##,
            sx(lo),
            sy(f.predict(lo)),
            sx(hi),
            sy(f.predict(hi))
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">b = {:.2} [{:.2},{:.2}], R² = {:.2}, n = {}</text>"#,
            LEFT + 8.0,
            TOP + 15.0,
            f.b,
            f.b_ci.0,
            f.b_ci.1,
            f.r2_log,
            f.n_points
        );
    }
    s.push_str("</svg>\n");
    s
}
