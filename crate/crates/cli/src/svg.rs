//! Self-contained SVG plots of step Hamiltonians.

use std::fmt::Write;

use canon_core::StepHamiltonian;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

struct Frame {
    x_max: f64,
    y_lo: f64,
    y_hi: f64,
    log: bool,
}

impl Frame {
    fn x(&self, t: f64) -> f64 {
        LEFT + t / self.x_max * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        HEIGHT - BOTTOM - (v - self.y_lo) / (self.y_hi - self.y_lo) * (HEIGHT - TOP - BOTTOM)
    }
}

/// `h11` steps as horizontal segments with an optional reference curve.
/// Nonpositive values are dropped on a log axis.
pub fn render_svg(h: &StepHamiltonian, reference: Option<&[(f64, f64)]>, log_scale: bool) -> String {
    let keep = |v: f64| v.is_finite() && (!log_scale || v > 0.0);
    let scale = |v: f64| if log_scale { v.log10() } else { v };
    let reference = reference.unwrap_or(&[]);
    let values = h
        .steps()
        .iter()
        .map(|s| s.h11)
        .chain(reference.iter().map(|p| p.1))
        .filter(|v| keep(*v))
        .map(scale);
    let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 * hi.abs().max(1.0) {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    let frame = Frame {
        x_max: h.t_max().max(f64::MIN_POSITIVE),
        y_lo: lo - pad,
        y_hi: hi + pad,
        log: log_scale,
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, y0) = (LEFT, HEIGHT - BOTTOM);
    let _ = writeln!(
        out,
        r#"<path d="M{x0} {TOP} L{x0} {y0} L{:.3} {y0}" stroke="black" fill="none"/>"#,
        WIDTH - RIGHT
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let t = f * frame.x_max;
        let px = frame.x(t);
        let _ = writeln!(out, r#"<line x1="{px:.3}" y1="{y0}" x2="{px:.3}" y2="{:.3}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(out, r#"<text x="{px:.3}" y="{:.3}" text-anchor="middle">{}</text>"#, y0 + 18.0, tick_label(t));
        let v = frame.y_lo + f * (frame.y_hi - frame.y_lo);
        let py = HEIGHT - BOTTOM - f * (HEIGHT - TOP - BOTTOM);
        let label = if log_scale { format!("1e{}", tick_label(v)) } else { tick_label(v) };
        let _ = writeln!(out, r#"<line x1="{:.3}" y1="{py:.3}" x2="{x0}" y2="{py:.3}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(out, r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{label}</text>"#, x0 - 8.0, py + 4.0);
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">t</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{:.3}" text-anchor="middle" transform="rotate(-90 15 {:.3})">h11{}</text>"#,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        if log_scale { " (log)" } else { "" }
    );

    let s = h.step_length();
    for (n, step) in h.steps().iter().enumerate().filter(|(_, st)| keep(st.h11)) {
        let py = frame.y(step.h11);
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{py:.3}" x2="{:.3}" y2="{py:.3}" stroke="steelblue" stroke-width="2"/>"#,
            frame.x(n as f64 * s),
            frame.x((n + 1) as f64 * s)
        );
    }
    let points: Vec<String> = reference
        .iter()
        .filter(|(t, v)| keep(*v) && *t >= 0.0 && *t <= frame.x_max)
        .map(|&(t, v)| format!("{:.3},{:.3}", frame.x(t), frame.y(v)))
        .collect();
    if !points.is_empty() {
        let _ = writeln!(
            out,
            r#"<polyline points="{}" stroke="firebrick" fill="none" stroke-width="1.5"/>"#,
            points.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_and_reference() {
        let h = StepHamiltonian::diagonal(0.5, &[1.0, 0.5, 0.25]).unwrap();
        let curve: Vec<(f64, f64)> = (0..=10).map(|i| (i as f64 * 0.15, 1.0 / (1.0 + i as f64))).collect();
        let svg = render_svg(&h, Some(&curve), false);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("stroke=\"steelblue\"").count(), 3);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg, render_svg(&h, Some(&curve), false));
    }

    #[test]
    fn steps_only_and_log() {
        let h = StepHamiltonian::diagonal(0.5, &[1.0, 3.0, 6.0, 10.0]).unwrap();
        let svg = render_svg(&h, None, true);
        assert!(!svg.contains("<polyline"));
        assert!(svg.contains("(log)"));
        assert!(!svg.contains("NaN"));
    }
}
