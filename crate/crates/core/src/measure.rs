//! Symbolic measures on the real line, their periodizations and
//! trigonometric moments.
//!
//! A [`MeasureSpec`] is a density (one of several closed-form families or a
//! tabulated profile), a finite list of point masses and a multiple of
//! Lebesgue measure. A [`PeriodicMeasure`] is such a spec restricted to one
//! period `[-T, T)`. Its moments are
//!
//! ```text
//! γ_k = (1 / 2T) ∫_{[-T, T)} exp(-i k π x / T) dμ(x)
//! ```
//!
//! so that for `T = π` they are the usual Fourier coefficients over
//! `[0, 2π)`, and `dμ = dx` has `γ_0 = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Absolute tolerance per moment for the quadrature path.
pub const MOMENT_TOL: f64 = 1e-11;

/// Number of points used when checking a density for negativity.
const POSITIVITY_SAMPLES: usize = 8192;

/// Density families understood by the moment engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    /// `a_0 + Σ_k (a_k cos kx + b_k sin kx)`; missing `b` means all zero.
    #[serde(rename = "trigpoly")]
    TrigPoly {
        a: Vec<f64>,
        #[serde(default)]
        b: Vec<f64>,
    },
    /// Piecewise-linear interpolant of `(x, rho)` samples, zero outside the
    /// sampled range.
    Tabulated { x: Vec<f64>, rho: Vec<f64> },
    /// `c1 + c2` on `x >= 0`, `c1 - c2` on `x < 0`.
    Homogeneous { c1: f64, c2: f64 },
    /// `scale * (shift + |x|)^m`.
    Power {
        m: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        shift: f64,
    },
    /// `scale * sin(freq x) / (freq x)`.
    Sinc {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default = "one")]
        freq: f64,
    },
    /// `scale * exp(-rate |x|)`.
    Exponential {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default = "one")]
        rate: f64,
    },
    #[default]
    None,
}

fn one() -> f64 {
    1.0
}

impl Density {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Density::TrigPoly { a, b } => {
                let mut v = a.first().copied().unwrap_or(0.0);
                let n = a.len().max(b.len());
                for k in 1..n {
                    let (s, c) = (k as f64 * x).sin_cos();
                    v += a.get(k).copied().unwrap_or(0.0) * c + b.get(k).copied().unwrap_or(0.0) * s;
                }
                v
            }
            Density::Tabulated { x: xs, rho } => {
                if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
                    return 0.0;
                }
                let i = xs.partition_point(|&p| p <= x);
                if i == 0 {
                    return rho[0];
                }
                if i >= xs.len() {
                    return rho[xs.len() - 1];
                }
                let (x0, x1) = (xs[i - 1], xs[i]);
                let s = (x - x0) / (x1 - x0);
                rho[i - 1] * (1.0 - s) + rho[i] * s
            }
            Density::Homogeneous { c1, c2 } => {
                if x >= 0.0 {
                    c1 + c2
                } else {
                    c1 - c2
                }
            }
            Density::Power { m, scale, shift } => scale * (shift + x.abs()).powf(*m),
            Density::Sinc { scale, freq } => {
                let u = freq * x;
                if u.abs() < 1e-8 {
                    scale * (1.0 - u * u / 6.0)
                } else {
                    scale * u.sin() / u
                }
            }
            Density::Exponential { scale, rate } => scale * (-rate * x.abs()).exp(),
            Density::None => 0.0,
        }
    }

    /// Points where the density is not smooth.
    fn kinks(&self) -> Vec<f64> {
        match self {
            Density::Tabulated { x, .. } => x.clone(),
            Density::Homogeneous { .. } | Density::Power { .. } | Density::Exponential { .. } => {
                vec![0.0]
            }
            _ => Vec::new(),
        }
    }

    /// Whether the density vanishes identically on `[lo, hi)`.
    fn vanishes_on(&self, lo: f64, hi: f64) -> bool {
        match self {
            Density::None => true,
            Density::TrigPoly { a, b } => a.iter().chain(b.iter()).all(|&c| c == 0.0),
            Density::Tabulated { x, rho } => {
                // a segment contributes if it overlaps the window and has a nonzero end
                !x.windows(2).zip(rho.windows(2)).any(|(xs, r)| {
                    xs[1] > lo && xs[0] < hi && (r[0] != 0.0 || r[1] != 0.0)
                })
            }
            Density::Homogeneous { c1, c2 } => {
                let pos = hi > 0.0 && c1 + c2 != 0.0;
                let neg = lo < 0.0 && c1 - c2 != 0.0;
                !(pos || neg)
            }
            Density::Power { scale, .. } | Density::Sinc { scale, .. } | Density::Exponential { scale, .. } => {
                *scale == 0.0
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidMeasure(msg.to_string()));
        match self {
            Density::TrigPoly { a, b } => {
                if a.iter().chain(b.iter()).any(|c| !c.is_finite()) {
                    return bad("trigpoly coefficients must be finite");
                }
            }
            Density::Tabulated { x, rho } => {
                if x.len() < 2 || x.len() != rho.len() {
                    return bad("tabulated density needs at least two (x, rho) pairs of equal length");
                }
                if x.windows(2).any(|w| !(w[1] > w[0])) {
                    return bad("tabulated x must be strictly increasing");
                }
                if rho.iter().any(|r| !r.is_finite() || *r < 0.0) || x.iter().any(|v| !v.is_finite()) {
                    return bad("tabulated samples must be finite and rho nonnegative");
                }
            }
            Density::Homogeneous { c1, c2 } => {
                if !(c1.is_finite() && c2.is_finite() && *c1 > c2.abs()) {
                    return bad("homogeneous density requires c1 > |c2|");
                }
            }
            Density::Power { m, scale, shift } => {
                if !(scale.is_finite() && *scale >= 0.0 && shift.is_finite() && *shift >= 0.0 && m.is_finite()) {
                    return bad("power density requires finite m, scale >= 0, shift >= 0");
                }
                if *shift == 0.0 && *m <= -1.0 {
                    return bad("power density with shift 0 needs m > -1 to be locally integrable");
                }
            }
            Density::Sinc { scale, freq } => {
                if !(scale.is_finite() && freq.is_finite() && *freq > 0.0) {
                    return bad("sinc density requires finite scale and freq > 0");
                }
            }
            Density::Exponential { scale, rate } => {
                if !(scale.is_finite() && *scale >= 0.0 && rate.is_finite()) {
                    return bad("exponential density requires scale >= 0 and finite rate");
                }
            }
            Density::None => {}
        }
        Ok(())
    }
}

/// A positive measure on ℝ: `density(x) dx + lebesgue_scale dx + Σ w_j δ_{λ_j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct MeasureSpec {
    #[serde(default)]
    pub density: Density,
    /// Point masses as `(location, weight)`.
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
    #[serde(default)]
    pub lebesgue_scale: f64,
}

impl MeasureSpec {
    pub fn lebesgue(scale: f64) -> Self {
        MeasureSpec {
            lebesgue_scale: scale,
            ..Default::default()
        }
    }

    pub fn with_density(density: Density) -> Self {
        MeasureSpec {
            density,
            ..Default::default()
        }
    }

    /// `a0 + Σ (a_k cos kx + b_k sin kx)`.
    pub fn trig_poly(a: Vec<f64>, b: Vec<f64>) -> Self {
        Self::with_density(Density::TrigPoly { a, b })
    }

    pub fn with_atom(mut self, location: f64, weight: f64) -> Self {
        self.atoms.push((location, weight));
        self
    }

    pub fn with_lebesgue(mut self, scale: f64) -> Self {
        self.lebesgue_scale = scale;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MeasureSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure spec serializes")
    }

    /// Total density (absolutely continuous part including the Lebesgue term).
    pub fn density_at(&self, x: f64) -> f64 {
        self.density.value(x) + self.lebesgue_scale
    }

    pub fn validate(&self) -> Result<()> {
        self.density.validate()?;
        if !(self.lebesgue_scale.is_finite() && self.lebesgue_scale >= 0.0) {
            return Err(Error::InvalidMeasure("lebesgue_scale must be >= 0".into()));
        }
        for (i, &(loc, w)) in self.atoms.iter().enumerate() {
            if !loc.is_finite() || !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "atom {i} must have a finite location and positive weight"
                )));
            }
            if self.atoms[..i].iter().any(|&(other, _)| other == loc) {
                return Err(Error::InvalidMeasure(format!("duplicate atom location {loc}")));
            }
        }
        Ok(())
    }

    /// Even in `x`: density symmetric and atoms paired with equal weights.
    pub fn is_even(&self) -> bool {
        let density_even = match &self.density {
            Density::TrigPoly { b, .. } => b.iter().all(|&c| c == 0.0),
            Density::Homogeneous { c2, .. } => *c2 == 0.0,
            Density::Tabulated { x, rho } => {
                let n = x.len();
                (0..n).all(|i| x[i] == -x[n - 1 - i] && rho[i] == rho[n - 1 - i])
            }
            Density::Power { .. } | Density::Sinc { .. } | Density::Exponential { .. } | Density::None => true,
        };
        density_even
            && self.atoms.iter().all(|&(loc, w)| {
                loc == 0.0 || self.atoms.iter().any(|&(l2, w2)| l2 == -loc && w2 == w)
            })
    }
}

/// A spec restricted to one period `[-T, T)` and extended `2T`-periodically.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicMeasure {
    half_period: f64,
    content: MeasureSpec,
}

impl PeriodicMeasure {
    /// Treat `spec` as an already periodic measure with half-period `half_period`:
    /// atoms are wrapped into `[-T, T)`, the density is sampled on that window.
    pub fn from_periodic(spec: MeasureSpec, half_period: f64) -> Result<Self> {
        check_half_period(half_period)?;
        spec.validate()?;
        let period = 2.0 * half_period;
        let mut content = spec;
        for atom in content.atoms.iter_mut() {
            let mut loc = (atom.0 + half_period).rem_euclid(period) - half_period;
            if loc >= half_period {
                loc -= period;
            }
            atom.0 = loc;
        }
        content.validate()?;
        let pm = PeriodicMeasure {
            half_period,
            content,
        };
        pm.check_nonempty()?;
        Ok(pm)
    }

    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    pub fn content(&self) -> &MeasureSpec {
        &self.content
    }

    fn check_nonempty(&self) -> Result<()> {
        let t = self.half_period;
        if self.content.atoms.is_empty()
            && self.content.lebesgue_scale == 0.0
            && self.content.density.vanishes_on(-t, t)
        {
            return Err(Error::EmptyPeriod { half_period: t });
        }
        Ok(())
    }
}

fn check_half_period(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidInput(format!("half-period must be positive, got {t}")));
    }
    Ok(())
}

/// Restrict `spec` to `[-T, T)` and extend periodically.
///
/// Atoms at `-T` are kept, atoms at `T` are dropped.
pub fn periodize(spec: &MeasureSpec, half_period: f64) -> Result<PeriodicMeasure> {
    check_half_period(half_period)?;
    spec.validate()?;
    let t = half_period;
    let mut content = spec.clone();
    content.atoms.retain(|&(loc, _)| loc >= -t && loc < t);
    let pm = PeriodicMeasure {
        half_period,
        content,
    };
    pm.check_nonempty()?;
    Ok(pm)
}

/// Whether the periodic measure has infinitely many points of support per
/// period. Finite atom lists alone do not qualify.
pub fn locally_infinite_support(pm: &PeriodicMeasure) -> bool {
    let t = pm.half_period;
    pm.content.lebesgue_scale > 0.0 || !pm.content.density.vanishes_on(-t, t)
}

/// Trigonometric moments `γ_0..γ_N` of a periodic measure. Only `k >= 0` is
/// stored; `γ_{-k} = conj(γ_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    half_period: f64,
    gamma: Vec<Complex64>,
}

impl MomentSequence {
    /// Build from raw moments. `γ_0` must be real and positive.
    pub fn new(half_period: f64, gamma: Vec<Complex64>) -> Result<Self> {
        check_half_period(half_period)?;
        let g0 = gamma
            .first()
            .ok_or_else(|| Error::InvalidInput("moment sequence is empty".into()))?;
        if !(g0.re > 0.0 && g0.re.is_finite()) || g0.im.abs() > 1e-12 * g0.re {
            return Err(Error::InvalidInput(format!("gamma_0 must be real and positive, got {g0}")));
        }
        if gamma.iter().any(|g| !(g.re.is_finite() && g.im.is_finite())) {
            return Err(Error::InvalidInput("moments must be finite".into()));
        }
        let mut gamma = gamma;
        gamma[0].im = 0.0;
        Ok(MomentSequence { half_period, gamma })
    }

    /// Moments on the standard `2π` period.
    pub fn on_circle(gamma: Vec<Complex64>) -> Result<Self> {
        Self::new(PI, gamma)
    }

    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    /// Highest stored order `N`.
    pub fn order(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.gamma
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma[0].re
    }

    /// `γ_k` for any integer `k`, using Hermitian symmetry for negative `k`.
    pub fn get(&self, k: isize) -> Complex64 {
        if k >= 0 {
            self.gamma[k as usize]
        } else {
            self.gamma[(-k) as usize].conj()
        }
    }

    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n > self.order() {
            return Err(Error::InsufficientMoments {
                needed: n,
                available: self.order(),
            });
        }
        Ok(MomentSequence {
            half_period: self.half_period,
            gamma: self.gamma[..=n].to_vec(),
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        MomentSequence {
            half_period: self.half_period,
            gamma: self.gamma.iter().map(|g| g * c).collect(),
        }
    }

    /// True when every `|Im γ_k| < tol` (the measure is even).
    pub fn is_real(&self, tol: f64) -> bool {
        self.gamma.iter().all(|g| g.im.abs() < tol)
    }
}

/// How [`trig_moments_with`] computes absolutely continuous contributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentMethod {
    /// Closed forms where available, quadrature otherwise.
    #[default]
    Auto,
    /// Force adaptive quadrature for every density family.
    Quadrature,
}

pub fn trig_moments(pm: &PeriodicMeasure, n_max: usize) -> Result<MomentSequence> {
    trig_moments_with(pm, n_max, MomentMethod::Auto)
}

pub fn trig_moments_with(pm: &PeriodicMeasure, n_max: usize, method: MomentMethod) -> Result<MomentSequence> {
    let t = pm.half_period;
    let spec = &pm.content;
    check_nonnegative(spec, t)?;

    let mut gamma = vec![Complex64::new(0.0, 0.0); n_max + 1];
    gamma[0] += spec.lebesgue_scale;

    let base = PI / t;
    for &(loc, w) in &spec.atoms {
        let step = Complex64::from_polar(1.0, -base * loc);
        let mut phase = Complex64::new(w / (2.0 * t), 0.0);
        for g in gamma.iter_mut() {
            *g += phase;
            phase *= step;
        }
    }

    let closed = match method {
        MomentMethod::Auto => closed_form_density_moments(&spec.density, t, n_max),
        MomentMethod::Quadrature => None,
    };
    let density_part = match closed {
        Some(v) => v,
        None => quadrature_moments(&spec.density, t, n_max)?,
    };
    for (g, d) in gamma.iter_mut().zip(density_part) {
        *g += d;
    }
    MomentSequence::new(t, gamma)
}

fn check_nonnegative(spec: &MeasureSpec, t: f64) -> Result<()> {
    let scale = density_scale(&spec.density) + spec.lebesgue_scale;
    let tol = 1e-12 * scale.max(1e-300);
    let check = |x: f64| {
        let v = spec.density_at(x);
        if v < -tol {
            Err(Error::NegativeDensity { x, value: v })
        } else {
            Ok(())
        }
    };
    if let Density::Tabulated { x, .. } = &spec.density {
        // linear interpolant: node values decide
        for &xi in x.iter().filter(|&&xi| xi >= -t && xi < t) {
            check(xi)?;
        }
        return Ok(());
    }
    if matches!(spec.density, Density::None) {
        return Ok(());
    }
    for i in 0..POSITIVITY_SAMPLES {
        check(-t + 2.0 * t * i as f64 / POSITIVITY_SAMPLES as f64)?;
    }
    Ok(())
}

fn density_scale(d: &Density) -> f64 {
    match d {
        Density::TrigPoly { a, b } => a.iter().chain(b.iter()).map(|c| c.abs()).sum(),
        Density::Tabulated { rho, .. } => rho.iter().copied().fold(0.0, f64::max),
        Density::Homogeneous { c1, c2 } => c1.abs() + c2.abs(),
        Density::Power { scale, .. } | Density::Sinc { scale, .. } | Density::Exponential { scale, .. } => {
            scale.abs()
        }
        Density::None => 0.0,
    }
}

/// Exact moments for the families that admit them on `[-T, T)`.
fn closed_form_density_moments(d: &Density, t: f64, n_max: usize) -> Option<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    match d {
        Density::None => Some(vec![zero; n_max + 1]),
        Density::TrigPoly { a, b } => {
            // cos(jx) has period 2T only when T/π is an integer p; then it
            // lands on moment index j·p.
            let ratio = t / PI;
            let p = ratio.round();
            if p < 1.0 || (ratio - p).abs() > 1e-12 * ratio.max(1.0) {
                return None;
            }
            let p = p as usize;
            let mut out = vec![zero; n_max + 1];
            out[0] += a.first().copied().unwrap_or(0.0);
            for j in 1..a.len().max(b.len()) {
                let k = j * p;
                if k > n_max {
                    break;
                }
                let aj = a.get(j).copied().unwrap_or(0.0);
                let bj = b.get(j).copied().unwrap_or(0.0);
                out[k] += Complex64::new(aj, -bj) * 0.5;
            }
            Some(out)
        }
        Density::Homogeneous { c1, c2 } => {
            // γ_k = c2 (1 - (-1)^k) / (i k π) for k ≥ 1
            let mut out = vec![zero; n_max + 1];
            out[0] = Complex64::new(*c1, 0.0);
            for (k, g) in out.iter_mut().enumerate().skip(1) {
                if k % 2 == 1 {
                    *g = Complex64::new(0.0, -2.0 * c2 / (k as f64 * PI));
                }
            }
            Some(out)
        }
        Density::Tabulated { x, rho } => Some(tabulated_moments(x, rho, t, n_max)),
        Density::Power { .. } | Density::Sinc { .. } | Density::Exponential { .. } => None,
    }
}

/// Exact moments of the piecewise-linear interpolant clipped to `[-T, T)`.
fn tabulated_moments(xs: &[f64], rho: &[f64], t: f64, n_max: usize) -> Vec<Complex64> {
    let interp = Density::Tabulated {
        x: xs.to_vec(),
        rho: rho.to_vec(),
    };
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let base = PI / t;
    for w in xs.windows(2) {
        let lo = w[0].max(-t);
        let hi = w[1].min(t);
        if hi <= lo {
            continue;
        }
        let (r0, r1) = (interp.value(lo), interp.value(hi));
        let h = hi - lo;
        for (k, g) in out.iter_mut().enumerate() {
            let omega = base * k as f64;
            let (ca, cb) = linear_exp_weights(omega * h);
            *g += Complex64::from_polar(h, -omega * lo) * (ca * r0 + cb * r1);
        }
    }
    for g in out.iter_mut() {
        *g /= 2.0 * t;
    }
    out
}

/// `(∫_0^1 (1-u) e^{-iθu} du, ∫_0^1 u e^{-iθu} du)`.
fn linear_exp_weights(theta: f64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    if theta.abs() < 1.0 {
        // Σ (-iθ)^n / n! · 1/((n+1)(n+2))  and  Σ (-iθ)^n / n! · 1/(n+2)
        let mut a = Complex64::new(0.0, 0.0);
        let mut b = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for n in 0..30 {
            let nf = n as f64;
            a += term / ((nf + 1.0) * (nf + 2.0));
            b += term / (nf + 2.0);
            term *= -i * theta / (nf + 1.0);
        }
        (a, b)
    } else {
        let e = Complex64::from_polar(1.0, -theta);
        let whole = (Complex64::new(1.0, 0.0) - e) / (i * theta);
        let b = i * e / theta + (e - 1.0) / (theta * theta);
        (whole - b, b)
    }
}

fn quadrature_moments(d: &Density, t: f64, n_max: usize) -> Result<Vec<Complex64>> {
    if matches!(d, Density::None) {
        return Ok(vec![Complex64::new(0.0, 0.0); n_max + 1]);
    }
    // one panel per oscillation of the highest harmonic, plus kinks
    let panels = n_max.max(4);
    let mut points: Vec<f64> = (0..=panels)
        .map(|i| -t + 2.0 * t * i as f64 / panels as f64)
        .collect();
    points.extend(d.kinks().into_iter().filter(|&x| x > -t && x < t));
    points.sort_by(f64::total_cmp);
    points.dedup();

    let base = PI / t;
    let dim = 2 * (n_max + 1);
    let raw = quad::integrate_vec(
        |x, out: &mut [f64]| {
            let v = d.value(x);
            let step = Complex64::from_polar(1.0, -base * x);
            let mut phase = Complex64::new(v, 0.0);
            for pair in out.chunks_exact_mut(2) {
                pair[0] = phase.re;
                pair[1] = phase.im;
                phase *= step;
            }
        },
        dim,
        &points,
        MOMENT_TOL * 2.0 * t,
    )?;
    Ok(raw
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]) / (2.0 * t))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn one_plus_cos_moments() {
        let pm = PeriodicMeasure::from_periodic(MeasureSpec::trig_poly(vec![1.0, 1.0], vec![]), PI).unwrap();
        let m = trig_moments(&pm, 3).unwrap();
        let expect = [c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        for (g, e) in m.as_slice().iter().zip(expect) {
            assert!(close(*g, e, 1e-15), "{g} vs {e}");
        }
    }

    #[test]
    fn one_plus_sin_moments() {
        let pm = PeriodicMeasure::from_periodic(MeasureSpec::trig_poly(vec![1.0, 0.0], vec![0.0, 1.0]), PI).unwrap();
        let m = trig_moments(&pm, 1).unwrap();
        assert!(close(m.get(0), c(1.0, 0.0), 1e-15));
        assert!(close(m.get(1), c(0.0, -0.5), 1e-15));
        assert!(close(m.get(-1), c(0.0, 0.5), 1e-15));
    }

    #[test]
    fn lebesgue_has_unit_mass_moment() {
        for t in [1.0, PI, 7.5] {
            let pm = periodize(&MeasureSpec::lebesgue(1.0), t).unwrap();
            let m = trig_moments(&pm, 5).unwrap();
            assert_eq!(m.gamma0(), 1.0);
            assert!(m.as_slice()[1..].iter().all(|g| g.norm() == 0.0));
        }
    }

    #[test]
    fn pointmass_periodization_moments() {
        let s2p = (2.0 * PI).sqrt();
        let spec = MeasureSpec::lebesgue(1.0 / s2p).with_atom(0.0, s2p);
        let t = 2.0 * PI;
        let m = trig_moments(&periodize(&spec, t).unwrap(), 4).unwrap();
        assert!((m.gamma0() - (1.0 / s2p + s2p / (2.0 * t))).abs() < 1e-15);
        for k in 1..=4 {
            assert!(close(m.get(k), c(s2p / (2.0 * t), 0.0), 1e-15));
        }
    }

    #[test]
    fn boundary_atoms_half_open() {
        let spec = MeasureSpec::lebesgue(1.0).with_atom(-PI, 1.0).with_atom(PI, 1.0);
        let pm = periodize(&spec, PI).unwrap();
        assert_eq!(pm.content().atoms, vec![(-PI, 1.0)]);
    }

    #[test]
    fn from_periodic_wraps_atoms() {
        let spec = MeasureSpec::lebesgue(1.0).with_atom(1.5 * PI, 2.0).with_atom(PI, 1.0);
        let pm = PeriodicMeasure::from_periodic(spec, PI).unwrap();
        let locs: Vec<f64> = pm.content().atoms.iter().map(|a| a.0).collect();
        assert!((locs[0] + 0.5 * PI).abs() < 1e-15);
        assert!((locs[1] + PI).abs() < 1e-15);
    }

    #[test]
    fn homogeneous_restriction_and_moments() {
        let spec = MeasureSpec::with_density(Density::Homogeneous { c1: 2.0, c2: 0.5 });
        let pm = periodize(&spec, PI).unwrap();
        assert_eq!(pm.content().density_at(1.0), 2.5);
        assert_eq!(pm.content().density_at(-1.0), 1.5);
        let exact = trig_moments(&pm, 6).unwrap();
        let quad = trig_moments_with(&pm, 6, MomentMethod::Quadrature).unwrap();
        for k in 0..=6 {
            assert!(close(exact.get(k), quad.get(k), 1e-11), "k={k}");
        }
    }

    #[test]
    fn empty_period_rejected() {
        let spec = MeasureSpec::lebesgue(0.0).with_atom(10.0, 1.0);
        assert!(matches!(periodize(&spec, PI), Err(Error::EmptyPeriod { .. })));
        let tab = MeasureSpec::with_density(Density::Tabulated {
            x: vec![5.0, 6.0],
            rho: vec![1.0, 1.0],
        });
        assert!(matches!(periodize(&tab, PI), Err(Error::EmptyPeriod { .. })));
    }

    #[test]
    fn negative_density_rejected_at_moment_time() {
        let pm = PeriodicMeasure::from_periodic(MeasureSpec::trig_poly(vec![1.0, 2.0], vec![]), PI).unwrap();
        assert!(matches!(trig_moments(&pm, 2), Err(Error::NegativeDensity { .. })));
        // 1 - cos touches zero but is fine
        let pm = PeriodicMeasure::from_periodic(MeasureSpec::trig_poly(vec![1.0, -1.0], vec![]), PI).unwrap();
        assert!(trig_moments(&pm, 2).is_ok());
    }

    #[test]
    fn invalid_specs() {
        let homog = MeasureSpec::with_density(Density::Homogeneous { c1: 1.0, c2: 1.0 });
        assert!(homog.validate().is_err());
        let atoms = MeasureSpec::lebesgue(1.0).with_atom(0.0, 1.0).with_atom(0.0, 2.0);
        assert!(atoms.validate().is_err());
        let neg = MeasureSpec::lebesgue(1.0).with_atom(0.0, -1.0);
        assert!(neg.validate().is_err());
        assert!(periodize(&MeasureSpec::lebesgue(1.0), 0.0).is_err());
    }

    #[test]
    fn support_classification() {
        let cos = PeriodicMeasure::from_periodic(MeasureSpec::trig_poly(vec![1.0, 1.0], vec![]), PI).unwrap();
        assert!(locally_infinite_support(&cos));
        let atom = periodize(&MeasureSpec::default().with_atom(0.0, 1.0), PI).unwrap();
        assert!(!locally_infinite_support(&atom));
        let mixed = periodize(&MeasureSpec::lebesgue(0.5).with_atom(0.0, 1.0), PI).unwrap();
        assert!(locally_infinite_support(&mixed));
    }

    #[test]
    fn tabulated_matches_quadrature() {
        let x: Vec<f64> = (0..=40).map(|i| -4.0 + 0.2 * i as f64).collect();
        let rho: Vec<f64> = x.iter().map(|v| 1.0 + (0.7 * v).sin().abs()).collect();
        let pm = periodize(&MeasureSpec::with_density(Density::Tabulated { x, rho }), 3.0).unwrap();
        let exact = trig_moments(&pm, 40).unwrap();
        let quad = trig_moments_with(&pm, 40, MomentMethod::Quadrature).unwrap();
        for k in 0..=40 {
            assert!(close(exact.get(k), quad.get(k), 1e-11), "k={k}: {} vs {}", exact.get(k), quad.get(k));
        }
    }

    #[test]
    fn linear_weights_branches_agree_at_switch() {
        let (a0, b0) = linear_exp_weights(0.999_999_999);
        let (a1, b1) = linear_exp_weights(1.000_000_001);
        assert!((a0 - a1).norm() < 1e-8 && (b0 - b1).norm() < 1e-8);
    }

    #[test]
    fn json_schema_round_trip() {
        let text = r#"{"density":{"kind":"trigpoly","a":[1,1]},"atoms":[[0.5,2.0]],"lebesgue_scale":0.25}"#;
        let spec = MeasureSpec::from_json(text).unwrap();
        assert_eq!(spec.density, Density::TrigPoly { a: vec![1.0, 1.0], b: vec![] });
        assert_eq!(spec.atoms, vec![(0.5, 2.0)]);
        assert_eq!(MeasureSpec::from_json(&spec.to_json()).unwrap(), spec);
        let power = MeasureSpec::from_json(r#"{"density":{"kind":"power","m":0.5},"lebesgue_scale":1}"#).unwrap();
        assert_eq!(power.density, Density::Power { m: 0.5, scale: 1.0, shift: 0.0 });
        assert!(MeasureSpec::from_json(r#"{"density":{"kind":"homogeneous","c1":1,"c2":2}}"#).is_err());
    }
}
