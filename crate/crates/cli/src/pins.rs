//! Known step values for the trigonometric densities `1 ± cos x`, `1 ± sin x`.

use std::f64::consts::PI;

use canon_core::{Complex64, MomentSequence, Step};

/// Relative tolerance for known values.
pub const TOL: f64 = 1e-9;

const SIN_H: [f64; 7] = [1.0, 5.0 / 3.0, 4.0 / 3.0, 4.0 / 5.0, 13.0 / 15.0, 25.0 / 21.0, 8.0 / 7.0];
const SIN_G: [f64; 7] = [0.0, -4.0 / 3.0, -5.0 / 3.0, -1.0, -2.0 / 3.0, -22.0 / 21.0, -9.0 / 7.0];

pub struct PinReport {
    pub name: &'static str,
    pub checked: usize,
    pub max_error: f64,
}

fn one_plus_cos(n: usize) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let nf = n as f64;
    let top = sign * (2.0 * nf + 3.0) + 1.0;
    top * top / (8.0 * (nf + 1.0) * (nf + 2.0))
}

fn one_minus_cos(n: usize) -> f64 {
    ((n + 1) * (n + 2)) as f64 / 2.0
}

/// Which of the four densities `m` comes from, if any.
fn identify(m: &MomentSequence) -> Option<&'static str> {
    if (m.half_period() - PI).abs() > 1e-12 || m.order() < 1 {
        return None;
    }
    let close = |a: Complex64, re: f64, im: f64| (a - Complex64::new(re, im)).norm() < 1e-12;
    if !close(m.get(0), 1.0, 0.0) || (2..=m.order()).any(|k| !close(m.get(k as isize), 0.0, 0.0)) {
        return None;
    }
    let g1 = m.get(1);
    [
        ("1+cos", 0.5, 0.0),
        ("1-cos", -0.5, 0.0),
        ("1+sin", 0.0, -0.5),
        ("1-sin", 0.0, 0.5),
    ]
    .into_iter()
    .find(|&(_, re, im)| close(g1, re, im))
    .map(|(name, _, _)| name)
}

/// Compare computed steps with the known values, when `m` is recognized.
pub fn check(m: &MomentSequence, steps: &[Step]) -> Option<PinReport> {
    let name = identify(m)?;
    let mut max_error = 0.0f64;
    let mut checked = 0;
    for (n, s) in steps.iter().enumerate() {
        let (h, g) = match name {
            "1+cos" => (one_plus_cos(n), 0.0),
            "1-cos" => (one_minus_cos(n), 0.0),
            _ if n >= SIN_H.len() => break,
            "1+sin" => (SIN_H[n], SIN_G[n]),
            _ => (SIN_H[n], -SIN_G[n]),
        };
        max_error = max_error
            .max((s.h11 - h).abs() / h.abs().max(1.0))
            .max((s.g - g).abs() / g.abs().max(1.0));
        checked += 1;
    }
    Some(PinReport { name, checked, max_error })
}
