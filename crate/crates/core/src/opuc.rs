//! Orthogonal polynomials on the unit circle.
//!
//! Conventions: moments `γ_k` as in [`crate::measure`], monic polynomials
//! `Φ_n` orthogonal for the inner product `⟨z^j, z^k⟩ = γ_{k-j}`, and the
//! Szegő recursion
//!
//! ```text
//! Φ_{n+1}(z) = z Φ_n(z) - conj(α_n) Φ_n*(z),   Φ_n*(z) = z^n conj(Φ_n(1/conj z))
//! ```
//!
//! so that `α_0 = γ_1/γ_0`. Orthonormal polynomials are `φ_n = Φ_n / ‖Φ_n‖`
//! with `‖Φ_0‖² = γ_0`. With these choices `h_n = |φ_n(1)|²` reproduces the
//! Toeplitz-route steps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inverse::{StepHamiltonian, StepSeries};
use crate::measure::MomentSequence;
use crate::toeplitz::{Breakdown, DEFAULT_PD_TOL};

/// Verblunsky coefficients together with the total mass `γ_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerblunskySeq {
    pub gamma0: f64,
    /// Serialized as `[re, im]` pairs.
    pub alpha: Vec<Complex64>,
}

impl VerblunskySeq {
    pub fn new(gamma0: f64, alpha: Vec<Complex64>) -> Result<Self> {
        let v = VerblunskySeq { gamma0, alpha };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma0.is_finite() && self.gamma0 > 0.0) {
            return Err(Error::InvalidInput(format!("gamma0 must be positive, got {}", self.gamma0)));
        }
        if let Some((n, a)) = self.alpha.iter().enumerate().find(|(_, a)| !(a.norm() < 1.0)) {
            return Err(Error::InvalidInput(format!("|alpha_{n}| = {} is not below 1", a.norm())));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verblunsky sequence serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: VerblunskySeq = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        v.validate()?;
        Ok(v)
    }
}

/// `φ_0..φ_N` and `φ*_0..φ*_N` at one point of the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoPolyEval {
    pub eta: Complex64,
    pub phi: Vec<Complex64>,
    pub phi_star: Vec<Complex64>,
}

/// Verblunsky coefficients from as many moments as stay positive definite.
fn verblunsky_partial(m: &MomentSequence, pd_tol: f64) -> (VerblunskySeq, Option<Breakdown>) {
    let g0 = m.gamma0();
    let threshold = pd_tol * g0;
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    let mut norm = g0;
    let mut alpha = Vec::with_capacity(m.order());
    let mut breakdown = None;

    for n in 0..m.order() {
        // conj(α_n) ‖Φ_n‖² = ⟨zΦ_n, 1⟩ = Σ_j Φ_j conj(γ_{j+1})
        let inner: Complex64 = phi
            .iter()
            .enumerate()
            .map(|(j, p)| p.conj() * m.get(j as isize + 1))
            .sum();
        let a = inner / norm;
        let next_norm = norm * (1.0 - a.norm_sqr());
        if !(a.norm() < 1.0 && next_norm > threshold) {
            breakdown = Some(Breakdown {
                order: n + 1,
                innovation: next_norm,
            });
            break;
        }
        let mut next = Vec::with_capacity(n + 2);
        next.push(-a.conj());
        for j in 1..=n + 1 {
            let star = if j <= n { phi[n - j].conj() } else { Complex64::new(0.0, 0.0) };
            next.push(phi[j - 1] - a.conj() * star);
        }
        phi = next;
        norm = next_norm;
        alpha.push(a);
    }
    (VerblunskySeq { gamma0: g0, alpha }, breakdown)
}

/// `α_0..α_{N-1}` from moments `γ_0..γ_N`.
pub fn verblunsky_from_moments(m: &MomentSequence) -> Result<VerblunskySeq> {
    match verblunsky_partial(m, DEFAULT_PD_TOL) {
        (v, None) => Ok(v),
        (_, Some(b)) => Err(b.into()),
    }
}

/// Inverse of [`verblunsky_from_moments`]: `γ_0..γ_N` on the `2π` circle.
pub fn moments_from_verblunsky(v: &VerblunskySeq, n: usize) -> Result<MomentSequence> {
    moments_from_verblunsky_on(v, n, std::f64::consts::PI)
}

fn moments_from_verblunsky_on(v: &VerblunskySeq, n: usize, half_period: f64) -> Result<MomentSequence> {
    v.validate()?;
    if n > v.len() {
        return Err(Error::InvalidInput(format!(
            "{n} moments beyond gamma_0 need {n} Verblunsky coefficients, have {}",
            v.len()
        )));
    }
    let mut gamma = Vec::with_capacity(n + 1);
    gamma.push(Complex64::new(v.gamma0, 0.0));
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    let mut norm = v.gamma0;
    for k in 0..n {
        let a = v.alpha[k];
        // α_k ‖Φ_k‖² = Σ_j conj(Φ_j) γ_{j+1}; Φ_k is monic so γ_{k+1} enters with weight 1
        let known: Complex64 = (0..k).map(|j| phi[j].conj() * gamma[j + 1]).sum();
        gamma.push(a * norm - known);
        let mut next = Vec::with_capacity(k + 2);
        next.push(-a.conj());
        for j in 1..=k + 1 {
            let star = if j <= k { phi[k - j].conj() } else { Complex64::new(0.0, 0.0) };
            next.push(phi[j - 1] - a.conj() * star);
        }
        phi = next;
        norm *= 1.0 - a.norm_sqr();
    }
    MomentSequence::new(half_period, gamma)
}

/// Orthonormal polynomials and their reversals at `eta`, through degree `n`.
pub fn phi_at(v: &VerblunskySeq, eta: Complex64, n: usize) -> Result<OrthoPolyEval> {
    if (eta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError(format!("|eta| = {} is not 1", eta.norm())));
    }
    if n > v.len() {
        return Err(Error::InvalidInput(format!(
            "degree {n} needs {n} Verblunsky coefficients, have {}",
            v.len()
        )));
    }
    let start = Complex64::new(1.0 / v.gamma0.sqrt(), 0.0);
    let mut phi = Vec::with_capacity(n + 1);
    let mut phi_star = Vec::with_capacity(n + 1);
    let (mut p, mut ps) = (start, start);
    phi.push(p);
    phi_star.push(ps);
    for a in &v.alpha[..n] {
        let rho = (1.0 - a.norm_sqr()).sqrt();
        let zp = eta * p;
        let next = (zp - a.conj() * ps) / rho;
        let next_star = (ps - a * zp) / rho;
        p = next;
        ps = next_star;
        phi.push(p);
        phi_star.push(ps);
    }
    Ok(OrthoPolyEval { eta, phi, phi_star })
}

/// Dual measure: `α_n → -α_n`, same mass (the map is an involution).
pub fn dual_verblunsky(v: &VerblunskySeq) -> VerblunskySeq {
    VerblunskySeq {
        gamma0: v.gamma0,
        alpha: v.alpha.iter().map(|a| -a).collect(),
    }
}

fn checked_order(m: &MomentSequence, n: usize) -> Result<MomentSequence> {
    m.truncated(n)
}

/// `h_n = |φ_n(1)|²` for `n ≤ N`.
pub fn h_via_opuc(m: &MomentSequence, n: usize) -> Result<StepSeries> {
    h_via_opuc_with(m, n, DEFAULT_PD_TOL)
}

pub fn h_via_opuc_with(m: &MomentSequence, n: usize, pd_tol: f64) -> Result<StepSeries> {
    let (v, breakdown) = verblunsky_partial(&checked_order(m, n)?, pd_tol);
    let eval = phi_at(&v, Complex64::new(1.0, 0.0), v.len())?;
    Ok(StepSeries {
        values: eval.phi.iter().map(|p| p.norm_sqr()).collect(),
        breakdown,
    })
}

/// `g_n = -Im(φ̃_n(1)/φ_n(1)) / Re(φ̃_n(1)/φ_n(1))` with `φ̃` the orthonormal
/// polynomials of the dual measure.
pub fn g_via_opuc(m: &MomentSequence, n: usize) -> Result<StepSeries> {
    g_via_opuc_with(m, n, DEFAULT_PD_TOL)
}

pub fn g_via_opuc_with(m: &MomentSequence, n: usize, pd_tol: f64) -> Result<StepSeries> {
    let (v, breakdown) = verblunsky_partial(&checked_order(m, n)?, pd_tol);
    let one = Complex64::new(1.0, 0.0);
    let primal = phi_at(&v, one, v.len())?;
    let dual = phi_at(&dual_verblunsky(&v), one, v.len())?;
    let mut values = Vec::with_capacity(primal.phi.len());
    for (order, (p, d)) in primal.phi.iter().zip(&dual.phi).enumerate() {
        let ratio = d / p;
        if ratio.re.abs() < 1e-12 * ratio.norm() {
            return Err(Error::DegenerateRatio { order });
        }
        values.push(if order == 0 { 0.0 } else { -ratio.im / ratio.re });
    }
    Ok(StepSeries { values, breakdown })
}

/// Verblunsky coefficients of a diagonal step Hamiltonian,
/// `α_n = (1 - h_{n+1}/h_n) / (1 + h_{n+1}/h_n)`, with `γ_0 = 1/h_0`.
pub fn verblunsky_from_steps(h: &StepHamiltonian) -> Result<VerblunskySeq> {
    if let Some((step, s)) = h.steps().iter().enumerate().find(|(_, s)| s.g != 0.0) {
        return Err(Error::NonDiagonalHamiltonian { step, g: s.g });
    }
    let h11 = h.h11();
    let first = *h11
        .first()
        .ok_or_else(|| Error::InvalidInput("Hamiltonian has no steps".into()))?;
    let alpha = h11
        .windows(2)
        .map(|w| {
            let r = w[1] / w[0];
            Complex64::new((1.0 - r) / (1.0 + r), 0.0)
        })
        .collect();
    VerblunskySeq::new(1.0 / first, alpha)
}

/// Moments `γ_0..γ_N` of the spectral measure of a diagonal step
/// Hamiltonian. The half-period is `π / (2 · step_length)`.
pub fn direct_moments(h: &StepHamiltonian, n: usize) -> Result<MomentSequence> {
    let v = verblunsky_from_steps(h)?;
    moments_from_verblunsky_on(&v, n, h.half_period())
}
