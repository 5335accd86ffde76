//! Toeplitz moment matrices `Γ_n`, their zero-diagonal companions `Δ_n`, and
//! the summed-inverse functionals `S[Γ_n^{-1}]`, `S[Δ_n Γ_n^{-1}]`
//! (`S[A]` = sum of all entries).
//!
//! Two independent linear-algebra paths are provided: a dense Hermitian
//! Cholesky factorization and a Levinson-type recursion that produces the
//! solutions of `Γ_k x = 1` for every `k ≤ n` in `O(n²)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::MomentSequence;

/// Continue the recursion only while the innovation exceeds `PD_TOL · γ_0`.
pub const DEFAULT_PD_TOL: f64 = 1e-13;

/// Imaginary parts of `S[Γ^{-1}]` and real parts of `S[ΔΓ^{-1}]` above this
/// (relative) size mean the moment data is inconsistent.
const REALNESS_TOL: f64 = 1e-10;

/// Where a recursion lost positive definiteness.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Breakdown {
    /// First order that could not be computed.
    pub order: usize,
    pub innovation: f64,
}

impl From<Breakdown> for Error {
    fn from(b: Breakdown) -> Self {
        Error::BreakdownAtOrder {
            order: b.order,
            innovation: b.innovation,
        }
    }
}

/// `(n+1)×(n+1)` Hermitian Toeplitz matrix with entry `(j, k) = γ_{k-j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix {
    first_row: Vec<Complex64>,
}

impl GammaMatrix {
    pub fn order(&self) -> usize {
        self.first_row.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        if k >= j {
            self.first_row[k - j]
        } else {
            self.first_row[j - k].conj()
        }
    }

    pub fn first_row(&self) -> &[Complex64] {
        &self.first_row
    }
}

/// Companion of [`GammaMatrix`]: `γ_{k-j}` above the diagonal, `-γ_{k-j}`
/// below it, zero on it.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMatrix {
    first_row: Vec<Complex64>,
}

impl DeltaMatrix {
    pub fn order(&self) -> usize {
        self.first_row.len() - 1
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        use std::cmp::Ordering::*;
        match k.cmp(&j) {
            Greater => self.first_row[k - j],
            Equal => Complex64::new(0.0, 0.0),
            Less => -self.first_row[j - k].conj(),
        }
    }
}

pub fn build_gamma(m: &MomentSequence, n: usize) -> Result<GammaMatrix> {
    if n > m.order() {
        return Err(Error::InsufficientMoments {
            needed: n,
            available: m.order(),
        });
    }
    Ok(GammaMatrix {
        first_row: m.as_slice()[..=n].to_vec(),
    })
}

pub fn build_delta(m: &MomentSequence, n: usize) -> Result<DeltaMatrix> {
    let g = build_gamma(m, n)?;
    Ok(DeltaMatrix { first_row: g.first_row })
}

/// Dense `L Lᴴ` factorization of a Hermitian positive definite matrix.
#[derive(Debug, Clone)]
pub struct HermitianCholesky {
    dim: usize,
    // row-major lower triangle
    l: Vec<Complex64>,
}

impl HermitianCholesky {
    /// Factor `g`, failing with the largest order at which positivity held.
    pub fn factor(g: &GammaMatrix, pd_tol: f64) -> Result<Self> {
        let (chol, failed) = Self::factor_prefix(g, pd_tol);
        match failed {
            None => Ok(chol),
            Some(order) => Err(Error::NotPositiveDefinite {
                last_good: order.checked_sub(1),
            }),
        }
    }

    /// Factor as many leading rows as stay positive; returns the failing
    /// order, if any.
    fn factor_prefix(g: &GammaMatrix, pd_tol: f64) -> (Self, Option<usize>) {
        let n = g.dim();
        let threshold = pd_tol * g.entry(0, 0).re;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = g.entry(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                if i == j {
                    if !(s.re > threshold) {
                        return (HermitianCholesky { dim: i, l: shrink(&l, n, i) }, Some(i));
                    }
                    l[i * n + i] = Complex64::new(s.re.sqrt(), 0.0);
                } else {
                    l[i * n + j] = s / l[j * n + j].re;
                }
            }
        }
        (HermitianCholesky { dim: n, l }, None)
    }

    /// Number of rows successfully factored.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Solve the leading `(k+1)×(k+1)` system `Γ_k x = rhs`.
    pub fn solve_leading(&self, k: usize, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let m = k + 1;
        assert!(m <= n && rhs.len() == m);
        let mut y = rhs.to_vec();
        for i in 0..m {
            let mut s = y[i];
            for j in 0..i {
                s -= self.l[i * n + j] * y[j];
            }
            y[i] = s / self.l[i * n + i].re;
        }
        for i in (0..m).rev() {
            let mut s = y[i];
            for j in i + 1..m {
                s -= self.l[j * n + i].conj() * y[j];
            }
            y[i] = s / self.l[i * n + i].re;
        }
        y
    }
}

fn shrink(l: &[Complex64], n: usize, m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        out[i * m..i * m + m].copy_from_slice(&l[i * n..i * n + m]);
    }
    out
}

fn ones(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0); n]
}

fn real_sum(x: &[Complex64]) -> Result<f64> {
    let s: Complex64 = x.iter().sum();
    if s.im.abs() > REALNESS_TOL * s.norm().max(1.0) {
        return Err(Error::NonRealResult { re: s.re, im: s.im });
    }
    Ok(s.re)
}

/// `1ᵀ Γ^{-1} 1` through the dense factorization.
pub fn sum_inverse(g: &GammaMatrix) -> Result<f64> {
    let chol = HermitianCholesky::factor(g, DEFAULT_PD_TOL)?;
    real_sum(&chol.solve_leading(g.order(), &ones(g.dim())))
}

/// `S[Δ Γ^{-1}]` divided by `i`.
///
/// `Δ` is anti-Hermitian, so `1ᵀ Δ Γ^{-1} 1` is purely imaginary for a
/// consistent moment sequence; the returned value is its imaginary part and a
/// non-negligible real part is reported as [`Error::NonRealResult`].
pub fn sum_delta_inverse(d: &DeltaMatrix, g: &GammaMatrix) -> Result<f64> {
    if d.order() != g.order() {
        return Err(Error::InvalidInput(format!(
            "Delta has order {}, Gamma has order {}",
            d.order(),
            g.order()
        )));
    }
    let chol = HermitianCholesky::factor(g, DEFAULT_PD_TOL)?;
    let y = chol.solve_leading(g.order(), &ones(g.dim()));
    let n = g.dim();
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for (k, yk) in y.iter().enumerate() {
            s += d.entry(j, k) * yk;
        }
    }
    delta_value(s)
}

fn delta_value(s: Complex64) -> Result<f64> {
    if s.re.abs() > REALNESS_TOL * s.norm().max(1.0) {
        return Err(Error::NonRealResult { re: s.re, im: s.im });
    }
    Ok(s.im)
}

/// `S[Δ_k Γ_k^{-1}] / i` given the solution `x` of `Γ_k x = 1`, in `O(k)`.
///
/// Column `l` of `Δ_k` sums to `P(l) - conj(P(k-l))` with `P(m) = γ_1 + … + γ_m`.
pub fn delta_sum_from_solution(m: &MomentSequence, x: &[Complex64]) -> Result<f64> {
    let k = x.len() - 1;
    let mut prefix = Vec::with_capacity(k + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    prefix.push(acc);
    for i in 1..=k {
        acc += m.get(i as isize);
        prefix.push(acc);
    }
    let s: Complex64 = x
        .iter()
        .enumerate()
        .map(|(l, xl)| xl * (prefix[l] - prefix[k - l].conj()))
        .sum();
    delta_value(s)
}

/// Dense reference for every order at once: one factorization of `Γ_n`,
/// then leading-block solves. Returns `(S[Γ_k^{-1}], S[Δ_k Γ_k^{-1}]/i)` for
/// `k` up to the last positive order.
pub fn dense_sums(m: &MomentSequence, n: usize, pd_tol: f64) -> Result<(Vec<f64>, Vec<f64>, Option<Breakdown>)> {
    let g = build_gamma(m, n)?;
    let d = build_delta(m, n)?;
    let (chol, failed) = HermitianCholesky::factor_prefix(&g, pd_tol);
    let mut sums = Vec::with_capacity(chol.dim());
    let mut delta_sums = Vec::with_capacity(chol.dim());
    for k in 0..chol.dim() {
        let y = chol.solve_leading(k, &ones(k + 1));
        sums.push(real_sum(&y)?);
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..=k {
            for (l, yl) in y.iter().enumerate() {
                s += d.entry(j, l) * yl;
            }
        }
        delta_sums.push(delta_value(s)?);
    }
    let breakdown = failed.map(|order| Breakdown {
        order,
        innovation: f64::NAN,
    });
    Ok((sums, delta_sums, breakdown))
}

/// Output of [`levinson_solve_ones`].
#[derive(Debug, Clone)]
pub struct LevinsonSweep {
    /// `solutions[k]` solves `Γ_k x = 1`.
    pub solutions: Vec<Vec<Complex64>>,
    /// `sums[k] = S[Γ_k^{-1}]`.
    pub sums: Vec<f64>,
    /// Reflection coefficients `κ_k` (k ≥ 1) of the backward predictor update;
    /// `κ_k = -α_{k-1}` in Verblunsky terms.
    pub reflections: Vec<Complex64>,
    /// Innovation variances `ε_k`.
    pub innovations: Vec<f64>,
    pub breakdown: Option<Breakdown>,
}

impl LevinsonSweep {
    /// Highest order with a valid solution.
    pub fn max_order(&self) -> usize {
        self.solutions.len() - 1
    }

    pub fn verblunsky(&self) -> Vec<Complex64> {
        self.reflections.iter().map(|k| -k).collect()
    }
}

/// Solve `Γ_k x = 1` for every `k ≤ n` by a Levinson recursion.
///
/// Stops early (recording a [`Breakdown`]) once an innovation variance
/// falls to `pd_tol · γ_0` or below.
pub fn levinson_solve_ones(m: &MomentSequence, n: usize, pd_tol: f64) -> Result<LevinsonSweep> {
    if n > m.order() {
        return Err(Error::InsufficientMoments {
            needed: n,
            available: m.order(),
        });
    }
    let g0 = m.gamma0();
    let threshold = pd_tol * g0;
    let one = Complex64::new(1.0, 0.0);

    // backward predictor b (monic in its last entry), Γ_k b = ε e_k
    let mut b = vec![one];
    let mut eps = g0;
    let mut x = vec![Complex64::new(1.0 / g0, 0.0)];

    let mut sweep = LevinsonSweep {
        solutions: vec![x.clone()],
        sums: vec![1.0 / g0],
        reflections: Vec::new(),
        innovations: vec![g0],
        breakdown: None,
    };

    for k in 1..=n {
        let delta: Complex64 = (1..=k).map(|l| m.get(l as isize) * b[l - 1]).sum();
        let kappa = -delta / eps;
        let new_eps = eps * (1.0 - kappa.norm_sqr());
        if !(new_eps > threshold) {
            sweep.breakdown = Some(Breakdown {
                order: k,
                innovation: new_eps,
            });
            break;
        }
        // b ← [0; b] + κ [f; 0] with f = J conj(b)
        let mut nb = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let shifted = if i >= 1 { b[i - 1] } else { Complex64::new(0.0, 0.0) };
            let forward = if i < k { b[k - 1 - i].conj() } else { Complex64::new(0.0, 0.0) };
            nb.push(shifted + kappa * forward);
        }
        b = nb;
        eps = new_eps;

        let r: Complex64 = (0..k).map(|l| m.get(l as isize - k as isize) * x[l]).sum();
        let c = (one - r) / eps;
        x.push(Complex64::new(0.0, 0.0));
        for (xi, bi) in x.iter_mut().zip(b.iter()) {
            *xi += c * bi;
        }

        sweep.sums.push(real_sum(&x)?);
        sweep.solutions.push(x.clone());
        sweep.reflections.push(kappa);
        sweep.innovations.push(eps);
    }
    Ok(sweep)
}
