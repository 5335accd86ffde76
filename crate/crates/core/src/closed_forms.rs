//! Analytic reference Hamiltonians and measures.
//!
//! Normalization: the measure `α dx + Σ_j π β_j δ_{λ_j}` has
//! `h(t) = 1/α` when there are no atoms, so Lebesgue measure gives the
//! identity Hamiltonian.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::format;
use crate::measure::MomentSequence;
use crate::quad;

type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Values of a Hamiltonian `[[h11, g], [g, h22]]` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianValue {
    pub h11: f64,
    pub g: f64,
    pub h22: f64,
}

/// A Hamiltonian given by formulas for `h11` and `g`; `h22 = (1 + g²)/h11`.
#[derive(Clone)]
pub struct HamiltonianFunction {
    h11: Profile,
    g: Profile,
    /// Evaluation is allowed for `t ≥ start` (or `t > start` when open).
    start: f64,
    open: bool,
    pub note: String,
}

impl fmt::Debug for HamiltonianFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianFunction")
            .field("start", &self.start)
            .field("open", &self.open)
            .field("note", &self.note)
            .finish_non_exhaustive()
    }
}

impl HamiltonianFunction {
    pub fn new<F, G>(h11: F, g: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        HamiltonianFunction {
            h11: Arc::new(h11),
            g: Arc::new(g),
            start: 0.0,
            open: false,
            note: String::new(),
        }
    }

    pub fn diagonal<F>(h11: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(h11, |_| 0.0)
    }

    /// Restrict evaluation to `t > start`.
    pub fn open_at(mut self, start: f64) -> Self {
        self.start = start;
        self.open = true;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn in_domain(&self, t: f64) -> bool {
        if self.open {
            t > self.start
        } else {
            t >= self.start
        }
    }

    pub fn eval(&self, t: f64) -> Result<HamiltonianValue> {
        if !self.in_domain(t) {
            return Err(Error::DomainError(format!("t = {t} is outside the domain")));
        }
        let h11 = (self.h11)(t);
        let g = (self.g)(t);
        if !(h11.is_finite() && h11 > 0.0 && g.is_finite()) {
            return Err(Error::DomainError(format!("h11 = {h11}, g = {g} at t = {t}")));
        }
        Ok(HamiltonianValue {
            h11,
            g,
            h22: (1.0 + g * g) / h11,
        })
    }

    pub fn h11(&self, t: f64) -> Result<f64> {
        self.eval(t).map(|v| v.h11)
    }

    /// `∫_a^b h11` by adaptive quadrature (endpoints are never sampled).
    pub fn integral_h11(&self, a: f64, b: f64) -> Result<f64> {
        if a < self.start || (!self.in_domain(a) && a == b) {
            return Err(Error::DomainError(format!("[{a}, {b}] leaves the domain")));
        }
        let f = self.h11.clone();
        quad::integrate(move |t| f(t), a, b, 1e-12)
    }

    /// CSV rows `t,h11,g,h22` on a grid.
    pub fn to_csv(&self, grid: &[f64]) -> Result<String> {
        let rows = grid
            .iter()
            .map(|&t| {
                let v = self.eval(t)?;
                Ok(vec![format::num(t), format::num(v.h11), format::num(v.g), format::num(v.h22)])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(format::csv(&["t", "h11", "g", "h22"], rows))
    }
}

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidInput(format!("beta must be nonnegative, got {beta}")));
    }
    Ok(())
}

/// `α/(α + tβ)²`, the Hamiltonian of `α dx + πβ δ_0`.
pub fn pointmass_h(alpha: f64, beta: f64, t: f64) -> f64 {
    let d = alpha + t * beta;
    alpha / (d * d)
}

pub fn pointmass_hamiltonian(alpha: f64, beta: f64) -> Result<HamiltonianFunction> {
    check_params(alpha, beta)?;
    Ok(HamiltonianFunction::diagonal(move |t| pointmass_h(alpha, beta, t)).with_note("point mass at 0"))
}

/// Hamiltonian of the measure whose Herglotz function gains `r·z`-type
/// mass: `h(t) / (1 + r ∫_0^t h)²`.
pub fn winkler_h<F>(h_base: F, r: f64, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let base = h_base(t);
    if r == 0.0 {
        return Ok(base);
    }
    let integral = if t == 0.0 { 0.0 } else { quad::integrate(&h_base, 0.0, t, 1e-13)? };
    let d = 1.0 + r * integral;
    Ok(base / (d * d))
}

/// Constant base `h ≡ 1/α`, in closed form.
pub fn winkler_constant_h(alpha: f64, r: f64, t: f64) -> f64 {
    let d = alpha + r * t;
    alpha / (d * d)
}

/// The Winkler transform of a diagonal Hamiltonian, as a new Hamiltonian.
pub fn winkler_hamiltonian(base: &HamiltonianFunction, r: f64) -> HamiltonianFunction {
    let h = base.h11.clone();
    HamiltonianFunction {
        h11: Arc::new(move |t| winkler_h(|s| h(s), r, t).unwrap_or(f64::NAN)),
        g: Arc::new(|_| 0.0),
        start: base.start,
        open: base.open,
        note: format!("winkler r = {r}"),
    }
}

/// Hamiltonian of `α dx + πβ δ_λ`, differentiated symbolically:
/// `d/dt [t/α − (β/α) s(t)²/(α + βt)]` with `s(t) = sin(λt)/λ`.
pub fn atom_at_lambda_h(alpha: f64, beta: f64, lambda: f64, t: f64) -> f64 {
    let (s, ds) = if lambda == 0.0 {
        (t, 1.0)
    } else {
        ((lambda * t).sin() / lambda, (lambda * t).cos())
    };
    let d = alpha + beta * t;
    1.0 / alpha - (beta / alpha) * (2.0 * s * ds / d - beta * s * s / (d * d))
}

/// `α dx + Σ_j π β_j δ_{λ_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSystem {
    pub alpha: f64,
    pub atoms: Vec<(f64, f64)>,
}

impl AtomSystem {
    pub fn new(alpha: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        check_params(alpha, 0.0)?;
        for (i, &(l, b)) in atoms.iter().enumerate() {
            if !l.is_finite() {
                return Err(Error::InvalidInput(format!("atom location {l} is not finite")));
            }
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::InvalidInput(format!("atom weight must be positive, got {b}")));
            }
            if atoms[..i].iter().any(|&(m, _)| m == l) {
                return Err(Error::InvalidInput(format!("duplicate atom location {l}")));
            }
        }
        Ok(AtomSystem { alpha, atoms })
    }
}

/// `sin(t x)/x`, equal to `t` at `x = 0`.
fn sinc_t(t: f64, x: f64) -> f64 {
    if x == 0.0 {
        t
    } else {
        (t * x).sin() / x
    }
}

/// `(π/2) ⟨B(α + S_t B)⁻¹ L_t, L_t⟩` with `L_t = √(2/π) (sinc_t(λ_j))_j`.
fn atoms_quadratic_form(sys: &AtomSystem, t: f64) -> Result<f64> {
    let n = sys.atoms.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (j, &(lj, _)) in sys.atoms.iter().enumerate() {
        for (k, &(lk, bk)) in sys.atoms.iter().enumerate() {
            m[(j, k)] = sinc_t(t, lj - lk) * bk;
        }
        m[(j, j)] += sys.alpha;
    }
    let l = DVector::from_iterator(n, sys.atoms.iter().map(|&(lj, _)| sinc_t(t, lj)));
    let scale = m.amax().max(sys.alpha);
    let lu = m.lu();
    let det = lu.determinant();
    if !(det.abs() > 1e-14 * scale.powi(n as i32)) {
        return Err(Error::SingularSystem { t });
    }
    let c = lu.solve(&l).ok_or(Error::SingularSystem { t })?;
    Ok(sys.atoms.iter().zip(c.iter()).zip(l.iter()).map(|((&(_, b), c), l)| b * c * l).sum())
}

/// Hamiltonian of `α dx + Σ π β_j δ_{λ_j}` through the finite linear
/// system `(α + S_t B) C(t) = L_t`:
/// `h(t) = 1/α − (π/(2α)) d/dt ⟨B C(t), L_t⟩`.
///
/// The derivative is a central difference with step `1e-5 (1 + t)` and one
/// Richardson level.
pub fn atoms_h(sys: &AtomSystem, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::DomainError(format!("t = {t} must be nonnegative")));
    }
    if sys.atoms.is_empty() {
        return Ok(1.0 / sys.alpha);
    }
    let d = 1e-5 * (1.0 + t);
    let central = |h: f64| -> Result<f64> {
        Ok((atoms_quadratic_form(sys, t + h)? - atoms_quadratic_form(sys, t - h)?) / (2.0 * h))
    };
    let coarse = central(d)?;
    let fine = central(d / 2.0)?;
    let derivative = (4.0 * fine - coarse) / 3.0;
    Ok((1.0 - derivative) / sys.alpha)
}

pub fn atoms_hamiltonian(sys: AtomSystem) -> HamiltonianFunction {
    HamiltonianFunction::diagonal(move |t| atoms_h(&sys, t).unwrap_or(f64::NAN)).with_note("finitely many atoms")
}

/// Constants of the homogeneous measure `(c₁ + c₂ sign x) dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousConstants {
    /// Constant diagonal entry `h11`.
    pub c1: f64,
    /// Slope of `g` in `log t`.
    pub c2: f64,
}

/// `atanh(x)/x`, accurate near 0.
fn atanh_over_x(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 3.0 + x2 * x2 / 5.0
    } else {
        x.atanh() / x
    }
}

/// `C₁ = √(π/2) (1/c₂) log((c₁+c₂)/(c₁−c₂))`, `C₂ = (1/√(2π)) log((c₁+c₂)/(c₁−c₂))`.
pub fn homogeneous_constants(c1: f64, c2: f64) -> Result<HomogeneousConstants> {
    if !(c1.is_finite() && c2.is_finite() && c1 > c2.abs()) {
        return Err(Error::InvalidInput(format!("need c1 > |c2|, got c1 = {c1}, c2 = {c2}")));
    }
    let x = c2 / c1;
    // log((c1+c2)/(c1-c2)) = 2 atanh(c2/c1)
    Ok(HomogeneousConstants {
        c1: (2.0 * PI).sqrt() / c1 * atanh_over_x(x),
        c2: 2.0 * x.atanh() / (2.0 * PI).sqrt(),
    })
}

/// `h11 = C₁`, `g = C − C₂ log t`, `h22 = (1 + g²)/C₁`, for `t > 0`.
///
/// The overall scale of `C₁` differs from the Lebesgue normalization by a
/// constant factor; see `approx::homogeneous_normalization_ratio`.
pub fn homogeneous_hamiltonian(c1: f64, c2: f64, c_free: f64) -> Result<HamiltonianFunction> {
    let k = homogeneous_constants(c1, c2)?;
    if !c_free.is_finite() {
        return Err(Error::InvalidInput("free constant must be finite".into()));
    }
    Ok(HamiltonianFunction::new(move |_| k.c1, move |t: f64| c_free - k.c2 * t.ln())
        .open_at(0.0)
        .with_note("homogeneous measure; defined for t > 0"))
}

const SERIES_TERMS: usize = 500;

/// `F_ν(x) = Σ_k (−1)^k (x/2)^{2k} / (2^ν k! Γ(k+ν+1))`, i.e. `J_ν(x)/x^ν`.
pub fn bessel_f(nu: f64, x: Complex64) -> Result<Complex64> {
    let g = gamma(nu + 1.0);
    if !g.is_finite() || g == 0.0 {
        return Err(Error::DomainError(format!("Gamma({}) is not finite", nu + 1.0)));
    }
    let q = -(x / 2.0) * (x / 2.0);
    let mut term = Complex64::new(1.0 / (2f64.powf(nu) * g), 0.0);
    let mut sum = term;
    for k in 0..SERIES_TERMS {
        let kf = k as f64;
        let ratio = q / ((kf + 1.0) * (kf + nu + 1.0));
        term *= ratio;
        sum += term;
        if ratio.norm() < 1.0 && term.norm() <= 1e-16 * sum.norm().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
    }
    Err(Error::SeriesDivergence { terms: SERIES_TERMS })
}

/// Real-argument [`bessel_f`].
pub fn bessel_f_real(nu: f64, x: f64) -> Result<f64> {
    bessel_f(nu, Complex64::new(x, 0.0)).map(|v| v.re)
}

/// The canonical system with `h(t) = t^m` and its solutions
/// `A(t,z) = g_ν F_{ν−1}(zt)`, `C(t,z) = g_ν t^{2ν} z F_ν(zt)`,
/// `ν = (m+1)/2`, `g_ν = 2^{ν−1} Γ(ν)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselSystem {
    pub m: f64,
    pub nu: f64,
    pub g_nu: f64,
}

impl BesselSystem {
    pub fn new(m: f64) -> Result<Self> {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::InvalidInput(format!("exponent m must be nonnegative, got {m}")));
        }
        let nu = (m + 1.0) / 2.0;
        Ok(BesselSystem {
            m,
            nu,
            g_nu: 2f64.powf(nu - 1.0) * gamma(nu),
        })
    }

    pub fn h(&self, t: f64) -> f64 {
        t.powf(self.m)
    }

    pub fn a(&self, t: f64, z: Complex64) -> Result<Complex64> {
        Ok(self.g_nu * bessel_f(self.nu - 1.0, z * t)?)
    }

    pub fn c(&self, t: f64, z: Complex64) -> Result<Complex64> {
        Ok(self.g_nu * t.powf(2.0 * self.nu) * z * bessel_f(self.nu, z * t)?)
    }

    pub fn hamiltonian(&self) -> HamiltonianFunction {
        let m = self.m;
        HamiltonianFunction::diagonal(move |t: f64| t.powf(m))
            .open_at(0.0)
            .with_note("power density; h11 = t^m")
    }
}

/// Measure on the circle with all Verblunsky coefficients equal to a real
/// `α ∈ (−1, 1)` and `γ_0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeronimusMeasure {
    pub alpha: f64,
}

impl GeronimusMeasure {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.abs() < 1.0) {
            return Err(Error::InvalidInput(format!("need |alpha| < 1, got {alpha}")));
        }
        Ok(GeronimusMeasure { alpha })
    }

    /// Support of the absolutely continuous part, as a subset of `(0, 2π)`.
    pub fn support(&self) -> (f64, f64) {
        let edge = 2.0 * self.alpha.abs().asin();
        (edge, 2.0 * PI - edge)
    }

    /// Density `w(θ)` relative to `dθ/2π`, for `θ ∈ [0, 2π)`.
    pub fn density(&self, theta: f64) -> f64 {
        let a = self.alpha;
        let s = (theta / 2.0).sin().abs();
        let c = (theta / 2.0).cos();
        let inner = 1.0 - a * a - c * c;
        if inner <= 0.0 || s == 0.0 {
            return 0.0;
        }
        inner.sqrt() / (s * (1.0 + a).abs())
    }

    /// Mass `s` of the atom at `θ = 0` relative to `dθ/2π` (zero for `α ≤ 0`).
    pub fn atom_mass(&self) -> f64 {
        let a = self.alpha;
        if a <= 0.0 {
            return 0.0;
        }
        2.0 / ((1.0 + a) * (1.0 + a)) * ((a + 0.5) * (a + 0.5) - 0.25)
    }

    /// `γ_0..γ_n` by quadrature of the density plus the exact atom.
    pub fn moments(&self, n: usize) -> Result<MomentSequence> {
        let (lo, hi) = self.support();
        let dim = 2 * (n + 1);
        // θ = edge ± width·u² on each half of the band removes the
        // square-root behaviour at the edges
        let vals = quad::integrate_vec(
            |u, out: &mut [f64]| {
                out.iter_mut().for_each(|v| *v = 0.0);
                for (edge, width) in [(lo, PI - lo), (hi, hi - PI)] {
                    let sign = if edge == lo { 1.0 } else { -1.0 };
                    let theta = edge + sign * width * u * u;
                    let w = self.density(theta) * 2.0 * width * u / (2.0 * PI);
                    for k in 0..=n {
                        let (s, c) = (k as f64 * theta).sin_cos();
                        out[2 * k] += w * c;
                        out[2 * k + 1] -= w * s;
                    }
                }
            },
            dim,
            &[0.0, 1.0],
            1e-13,
        )?;
        let atom = self.atom_mass();
        let gamma = (0..=n).map(|k| Complex64::new(vals[2 * k] + atom, vals[2 * k + 1])).collect();
        MomentSequence::on_circle(gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointmass_examples() {
        assert_eq!(pointmass_h(1.0, 1.0, 0.0), 1.0);
        assert_eq!(pointmass_h(2.0, 0.0, 7.0), 0.5);
        let a = 1.0 / (2.0 * PI).sqrt();
        let b = (2.0 / PI).sqrt();
        for t in [0.0f64, 0.5, 3.0] {
            let expect = (2.0 * PI).sqrt() / (1.0 + 2.0 * t).powi(2);
            assert!((pointmass_h(a, b, t) - expect).abs() < 1e-14);
        }
        let h = pointmass_hamiltonian(1.0, 1.0).unwrap().eval(1.0).unwrap();
        assert!((h.h22 - 4.0).abs() < 1e-15);
    }

    #[test]
    fn winkler_constant_and_zero() {
        let alpha = 2.0;
        for t in [0.0, 0.3, 4.0] {
            let v = winkler_h(|_| 1.0 / alpha, 0.7, t).unwrap();
            assert!((v - winkler_constant_h(alpha, 0.7, t)).abs() < 1e-14);
            assert_eq!(winkler_h(f64::exp, 0.0, t).unwrap(), t.exp());
        }
    }

    #[test]
    fn winkler_semigroup() {
        let base = HamiltonianFunction::diagonal(|t: f64| 1.0 + 0.5 * (3.0 * t).sin());
        let (x, y) = (0.4, 1.3);
        let twice = winkler_hamiltonian(&winkler_hamiltonian(&base, x), y);
        let once = winkler_hamiltonian(&base, x + y);
        for i in 0..=20 {
            let t = i as f64 * 0.5;
            let (a, b) = (twice.h11(t).unwrap(), once.h11(t).unwrap());
            assert!((a - b).abs() < 1e-8, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn atom_at_lambda_special_cases() {
        for t in [0.0, 0.7, 2.5] {
            assert!((atom_at_lambda_h(1.5, 0.8, 0.0, t) - pointmass_h(1.5, 0.8, t)).abs() < 1e-14);
            assert!((atom_at_lambda_h(1.5, 1e-9 * 0.0, 2.0, t) - 1.0 / 1.5).abs() < 1e-15);
            let lam: f64 = 1.7;
            let s = (lam * t).sin();
            let expect = s * s + ((lam * t).cos() - s / (lam * (1.0 + t))).powi(2);
            assert!((atom_at_lambda_h(1.0, 1.0, lam, t) - expect).abs() < 1e-14);
        }
        let near = atom_at_lambda_h(1.0, 2.0, 1e-9, 1.3);
        assert!((near - pointmass_h(1.0, 2.0, 1.3)).abs() < 1e-9);
    }

    #[test]
    fn atoms_single_atom_oracles() {
        let at_zero = AtomSystem::new(0.8, vec![(0.0, 1.2)]).unwrap();
        let at_one = AtomSystem::new(1.0, vec![(1.0, 1.0)]).unwrap();
        for i in 0..=50 {
            let t = i as f64 * 0.1;
            assert!((atoms_h(&at_zero, t).unwrap() - pointmass_h(0.8, 1.2, t)).abs() < 1e-6);
            assert!((atoms_h(&at_one, t).unwrap() - atom_at_lambda_h(1.0, 1.0, 1.0, t)).abs() < 1e-6);
        }
        assert!((atoms_h(&at_zero, 0.0).unwrap() - 1.0 / 0.8).abs() < 1e-9);
    }

    #[test]
    fn atoms_two_atoms_positive() {
        let sys = AtomSystem::new(1.0, vec![(-1.0, 0.5), (2.0, 1.5)]).unwrap();
        for i in 0..=30 {
            assert!(atoms_h(&sys, i as f64 * 0.2).unwrap() > 0.0);
        }
        assert!(AtomSystem::new(1.0, vec![(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(AtomSystem::new(0.0, vec![]).is_err());
    }

    #[test]
    fn homogeneous_constants_and_log_affinity() {
        let k = homogeneous_constants(2.0, 1.0).unwrap();
        assert!((k.c2 - 3f64.ln() / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert!((k.c1 - (PI / 2.0).sqrt() * 3f64.ln()).abs() < 1e-14);
        let even = homogeneous_constants(3.0, 0.0).unwrap();
        assert_eq!(even.c2, 0.0);
        assert!((even.c1 - (2.0 * PI).sqrt() / 3.0).abs() < 1e-15);
        let tiny = homogeneous_constants(3.0, 1e-7).unwrap();
        assert!((tiny.c1 - even.c1).abs() < 1e-13);

        let h = homogeneous_hamiltonian(2.0, 1.0, 0.25).unwrap();
        let g1 = h.eval(1.0).unwrap().g;
        for t in [0.01, 0.5, 3.0, 100.0] {
            let v = h.eval(t).unwrap();
            assert!((v.g - g1 + k.c2 * f64::ln(t)).abs() < 1e-14);
            assert!((v.h11 * v.h22 - v.g * v.g - 1.0).abs() < 1e-12);
        }
        assert!(matches!(h.eval(0.0), Err(Error::DomainError(_))));
        assert!(homogeneous_hamiltonian(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn bessel_at_zero_and_half_order() {
        for nu in [0.5, 0.75, 1.0, 2.5] {
            let expect = 1.0 / (2f64.powf(nu) * gamma(nu + 1.0));
            assert!((bessel_f_real(nu, 0.0).unwrap() - expect).abs() < 1e-15);
        }
        // F_{1/2}(x) = √(2/π) sin x / x
        for x in [0.3, 2.0, 7.5] {
            let expect = (2.0 / PI).sqrt() * f64::sin(x) / x;
            assert!((bessel_f_real(0.5, x).unwrap() - expect).abs() < 1e-13);
        }
        assert!(matches!(
            bessel_f(0.5, Complex64::new(2000.0, 0.0)),
            Err(Error::SeriesDivergence { .. })
        ));
    }

    #[test]
    fn bessel_free_system() {
        let sys = BesselSystem::new(0.0).unwrap();
        for (t, z) in [(0.5, Complex64::new(1.0, 0.0)), (1.7, Complex64::new(-2.0, 1.5))] {
            assert!((sys.a(t, z).unwrap() - (z * t).cos()).norm() < 1e-12);
            assert!((sys.c(t, z).unwrap() - (z * t).sin()).norm() < 1e-12);
        }
    }

    #[test]
    fn bessel_initial_values() {
        for m in [0.5, 1.0, 3.0] {
            let sys = BesselSystem::new(m).unwrap();
            let z = Complex64::new(2.0, -1.0);
            assert!((sys.a(0.0, z).unwrap() - 1.0).norm() < 1e-15);
            assert_eq!(sys.c(0.0, z).unwrap(), Complex64::new(0.0, 0.0));
            assert_eq!(sys.h(2.0), 2f64.powf(m));
        }
    }

    #[test]
    fn geronimus_mass_and_atom() {
        let g = GeronimusMeasure::new(-1.0 / 3.0).unwrap();
        assert_eq!(g.atom_mass(), 0.0);
        let m = g.moments(2).unwrap();
        assert!((m.gamma0() - 1.0).abs() < 1e-10);
        let g = GeronimusMeasure::new(1.0 / 3.0).unwrap();
        assert!((g.atom_mass() - 0.5).abs() < 1e-15);
        let m = g.moments(2).unwrap();
        assert!((m.gamma0() - 1.0).abs() < 1e-10);
        assert!((m.get(1).re - 1.0 / 3.0).abs() < 1e-10);
    }
}
