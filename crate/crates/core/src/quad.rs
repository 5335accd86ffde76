//! Composite Gauss–Legendre quadrature with adaptive bisection.
//!
//! Integrands are vector valued (one evaluation fills a slice) so that all
//! trigonometric moments of a density share the same refinement.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

const RULE_DEGREE: usize = 20;
const MAX_DEPTH: u32 = 50;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(RULE_DEGREE)
            .expect("degree >= 2")
            .into_node_weight_pairs()
    })
}

fn gauss<F>(f: &F, a: f64, b: f64, scratch: &mut [f64], out: &mut [f64])
where
    F: Fn(f64, &mut [f64]),
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    out.iter_mut().for_each(|v| *v = 0.0);
    for &(node, weight) in rule() {
        f(mid + half * node, scratch);
        for (o, s) in out.iter_mut().zip(scratch.iter()) {
            *o += weight * half * s;
        }
    }
}

/// Integrate a `dim`-valued function over the union of panels delimited by
/// `points` (sorted, at least two entries).
///
/// A panel is accepted once the single-panel estimate and the sum over its
/// two halves agree to within `tol` scaled by the panel's share of the
/// total length.
pub(crate) fn integrate_vec<F>(f: F, dim: usize, points: &[f64], tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, &mut [f64]),
{
    debug_assert!(points.len() >= 2);
    let total = points[points.len() - 1] - points[0];
    let mut result = vec![0.0; dim];
    if total <= 0.0 || dim == 0 {
        return Ok(result);
    }

    let mut scratch = vec![0.0; dim];
    let mut left = vec![0.0; dim];
    let mut right = vec![0.0; dim];
    let mut stack: Vec<(f64, f64, Vec<f64>, u32)> = Vec::new();

    for w in points.windows(2).rev() {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mut whole = vec![0.0; dim];
        gauss(&f, a, b, &mut scratch, &mut whole);
        stack.push((a, b, whole, 0));
    }

    while let Some((a, b, whole, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        gauss(&f, a, m, &mut scratch, &mut left);
        gauss(&f, m, b, &mut scratch, &mut right);
        let diff = whole
            .iter()
            .zip(left.iter().zip(right.iter()))
            .map(|(w, (l, r))| (w - l - r).abs())
            .fold(0.0, f64::max);
        let local_tol = tol * (b - a) / total;
        if diff <= local_tol || (b - a) <= f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
            for (acc, (l, r)) in result.iter_mut().zip(left.iter().zip(right.iter())) {
                *acc += l + r;
            }
        } else if depth >= MAX_DEPTH {
            return Err(Error::QuadratureFailure { a, b });
        } else {
            stack.push((m, b, right.clone(), depth + 1));
            stack.push((a, m, left.clone(), depth + 1));
        }
    }
    Ok(result)
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let v = integrate_vec(|x, out: &mut [f64]| out[0] = f(x), 1, &[lo, hi], tol)?;
    Ok(sign * v[0])
}

/// Like [`integrate`] but with extra breakpoints where the integrand is not
/// smooth.
pub fn integrate_with_breaks<F>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    points.push(b);
    points.sort_by(f64::total_cmp);
    let v = integrate_vec(|x, out: &mut [f64]| out[0] = f(x), 1, &points, tol)?;
    Ok(v[0])
}
