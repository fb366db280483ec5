//! CSV number formatting and the self-contained SVG plots.

use std::fmt::Write;

/// 12 significant digits, plain decimal, `.` separator.
pub fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

const SIZE: f64 = 800.0;
const MARGIN: f64 = 80.0;
pub const COLORS: [&str; 4] = ["#7f7f7f", "#1f77b4", "#2ca02c", "#d62728"];

pub struct Frame {
    xmax: f64,
    ymax: f64,
}

impl Frame {
    pub fn new(xmax: f64, ymax: f64) -> Self {
        let fix = |m: f64| if m > 0.0 && m.is_finite() { m * 1.05 } else { 1.0 };
        Frame { xmax: fix(xmax), ymax: fix(ymax) }
    }

    pub fn x(&self, v: f64) -> f64 {
        MARGIN + v / self.xmax * (SIZE - 2.0 * MARGIN)
    }

    pub fn y(&self, v: f64) -> f64 {
        SIZE - MARGIN - v / self.ymax * (SIZE - 2.0 * MARGIN)
    }
}

fn tick_step(max: f64) -> f64 {
    let raw = max / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag)
}

pub fn open(frame: &Frame, xlabel: &str, ylabel: &str, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800" font-family="sans-serif" font-size="14">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="800" height="800" style="fill:#ffffff"/>"#);
    let _ = writeln!(s, r#"<text x="400" y="40" text-anchor="middle" font-size="18">{title}</text>"#);
    let (x0, y0) = (frame.x(0.0), frame.y(0.0));
    let _ = writeln!(
        s,
        r#"<path d="M{x0} {:.2} L{x0} {y0} L{:.2} {y0}" style="fill:none;stroke:#000000;stroke-width:1.5"/>"#,
        MARGIN,
        SIZE - MARGIN
    );
    for (max, horizontal) in [(frame.xmax, true), (frame.ymax, false)] {
        let step = tick_step(max);
        let mut k = 0;
        while k as f64 * step <= max + 1e-12 {
            let v = k as f64 * step;
            let label = num((v * 1e6).round() / 1e6);
            if horizontal {
                let x = frame.x(v);
                let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{:.2}" style="stroke:#000000"/>"#, y0 + 6.0);
                let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, y0 + 24.0);
            } else {
                let y = frame.y(v);
                let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" style="stroke:#000000"/>"#, x0 - 6.0);
                let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, x0 - 10.0, y + 5.0);
            }
            k += 1;
        }
    }
    let _ = writeln!(s, r#"<text x="400" y="{}" text-anchor="middle">{xlabel}</text>"#, SIZE - 25.0);
    let _ = writeln!(s, r#"<text x="25" y="400" text-anchor="middle" transform="rotate(-90 25 400)">{ylabel}</text>"#);
    s
}

pub fn legend(s: &mut String, names: &[&str]) {
    for (i, n) in names.iter().enumerate() {
        let y = 80.0 + 24.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="560" y="{:.0}" width="16" height="16" style="fill:{c};fill-opacity:0.35;stroke:{c};stroke-width:2"/>"#,
            y - 13.0,
            c = COLORS[i % COLORS.len()]
        );
        let _ = writeln!(s, r#"<text x="584" y="{y:.0}">{n}</text>"#);
    }
}

pub fn polygon(s: &mut String, frame: &Frame, pts: &[(f64, f64)], color: &str) {
    if pts.is_empty() {
        return;
    }
    let list: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.3},{:.3}", frame.x(a), frame.y(b))).collect();
    let _ = writeln!(
        s,
        r#"<polygon points="{}" style="fill:{color};fill-opacity:0.15;stroke:{color};stroke-width:2"/>"#,
        list.join(" ")
    );
}

pub fn polyline(s: &mut String, frame: &Frame, pts: &[(f64, f64)], color: &str) {
    let list: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.3},{:.3}", frame.x(a), frame.y(b))).collect();
    let _ = writeln!(s, r#"<polyline points="{}" style="fill:none;stroke:{color};stroke-width:2"/>"#, list.join(" "));
}

pub fn close(mut s: String) -> String {
    s.push_str("</svg>\n");
    s
}
