//! Periodization of measures on the line and block averaging of
//! Hamiltonians, with convergence diagnostics.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::{homogeneous_constants, HamiltonianFunction};
use crate::error::{Error, Result};
use crate::format;
use crate::inverse::{InverseSolver, Recovery, StepHamiltonian};
use crate::measure::{locally_infinite_support, periodize, trig_moments, MeasureSpec, MomentSequence};
use crate::opuc::{direct_moments, verblunsky_from_steps, VerblunskySeq};
use crate::quad;
use crate::toeplitz::DEFAULT_PD_TOL;

fn at(half_period: f64) -> impl Fn(Error) -> Error {
    move |e| Error::AtHalfPeriod {
        half_period,
        source: Box::new(e),
    }
}

/// Number of steps covering `[0, t_max]` on the `π/(2T)` grid.
pub fn default_order(t_max: f64, half_period: f64) -> usize {
    ((t_max * 2.0 * half_period / PI) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

/// `periodize → trig_moments → recover` with the default positivity
/// threshold. Steps `0..=n` on the `π/(2T)` grid, or fewer on breakdown.
pub fn inverse_via_periodization(spec: &MeasureSpec, half_period: f64, n: usize) -> Result<Recovery> {
    inverse_via_periodization_with(spec, half_period, n, DEFAULT_PD_TOL)
}

pub fn inverse_via_periodization_with(spec: &MeasureSpec, half_period: f64, n: usize, pd_tol: f64) -> Result<Recovery> {
    let wrap = at(half_period);
    let pm = periodize(spec, half_period).map_err(&wrap)?;
    if !locally_infinite_support(&pm) {
        return Err(wrap(Error::InvalidMeasure(
            "periodized measure has finite support; the inverse problem needs a nontrivial density".into(),
        )));
    }
    let m = trig_moments(&pm, n).map_err(&wrap)?;
    InverseSolver::new(pd_tol).recover(&m, n).map_err(&wrap)
}

/// Reference Hamiltonian for a sweep.
#[derive(Debug, Clone)]
pub enum Reference {
    Function(HamiltonianFunction),
    Steps(StepHamiltonian),
}

impl Reference {
    fn integral_h11(&self, a: f64, b: f64) -> Result<f64> {
        match self {
            Reference::Function(f) => f.integral_h11(a, b),
            Reference::Steps(s) => s
                .integral_h11(a, b)
                .ok_or_else(|| Error::DomainError(format!("reference does not cover [{a}, {b}]"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalError {
    pub interval_a: f64,
    pub interval_b: f64,
    /// `None` when the approximant stopped before `b`.
    pub int_ht: Option<f64>,
    pub int_href: f64,
    pub abs_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub half_period: f64,
    pub requested_order: usize,
    /// Highest step index actually produced.
    pub max_order: Option<usize>,
    pub breakdown_order: Option<usize>,
    pub max_abs_g: Option<f64>,
    pub error: Option<String>,
    pub intervals: Vec<IntervalError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    /// Whether the half-periods form an arithmetic progression `T_n = n c`.
    pub arithmetic_progression: bool,
    pub entries: Vec<SweepEntry>,
}

impl ConvergenceReport {
    /// CSV rows `T,interval_a,interval_b,int_hT,int_href,abs_err`; missing
    /// values are written as `nan`.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(format::num).unwrap_or_else(|| "nan".into());
        format::csv(
            &["T", "interval_a", "interval_b", "int_hT", "int_href", "abs_err"],
            self.entries.iter().flat_map(|e| {
                e.intervals.iter().map(move |i| {
                    vec![
                        format::num(e.half_period),
                        format::num(i.interval_a),
                        format::num(i.interval_b),
                        opt(i.int_ht),
                        format::num(i.int_href),
                        opt(i.abs_err),
                    ]
                })
            }),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Errors on interval `i` in `T` order.
    pub fn errors_on(&self, i: usize) -> Vec<Option<f64>> {
        self.entries.iter().map(|e| e.intervals.get(i).and_then(|x| x.abs_err)).collect()
    }
}

/// True for `T_k = T_1 + (k−1) d` with `d = T_1`, i.e. `T_k = k c`.
fn is_arithmetic(ts: &[f64]) -> bool {
    match ts {
        [] => false,
        [t] => *t > 0.0,
        [first, ..] => ts
            .iter()
            .enumerate()
            .all(|(k, t)| (t - (k + 1) as f64 * first).abs() <= 1e-12 * t.abs()),
    }
}

/// Interval errors of periodized approximants over a list of half-periods.
/// `t_max` sets the order at each `T`; `None` means the largest interval end.
pub fn convergence_sweep(
    spec: &MeasureSpec,
    half_periods: &[f64],
    reference: &Reference,
    intervals: &[(f64, f64)],
    t_max: Option<f64>,
    pd_tol: f64,
) -> Result<ConvergenceReport> {
    for &(a, b) in intervals {
        if !(a >= 0.0 && b > a) {
            return Err(Error::InvalidInput(format!("interval [{a}, {b}] must satisfy 0 <= a < b")));
        }
    }
    if let Some(t) = half_periods.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidInput(format!("half-period {t} must be positive")));
    }
    let t_max = t_max.unwrap_or_else(|| intervals.iter().map(|i| i.1).fold(0.0, f64::max));
    let refs = intervals
        .iter()
        .map(|&(a, b)| reference.integral_h11(a, b))
        .collect::<Result<Vec<_>>>()?;

    let entries = half_periods
        .par_iter()
        .map(|&t| {
            let n = default_order(t_max, t);
            let mut entry = SweepEntry {
                half_period: t,
                requested_order: n,
                max_order: None,
                breakdown_order: None,
                max_abs_g: None,
                error: None,
                intervals: Vec::with_capacity(intervals.len()),
            };
            let recovery = inverse_via_periodization_with(spec, t, n, pd_tol);
            let ham = match recovery {
                Ok(r) => {
                    entry.max_order = r.hamiltonian.len().checked_sub(1);
                    entry.breakdown_order = r.breakdown.map(|b| b.order);
                    entry.max_abs_g = Some(r.hamiltonian.g().iter().fold(0.0, |m, g| f64::max(m, g.abs())));
                    Some(r.hamiltonian)
                }
                Err(e) => {
                    entry.error = Some(e.to_string());
                    None
                }
            };
            for (&(a, b), &href) in intervals.iter().zip(&refs) {
                let int_ht = ham.as_ref().and_then(|h| h.integral_h11(a, b));
                entry.intervals.push(IntervalError {
                    interval_a: a,
                    interval_b: b,
                    int_ht,
                    int_href: href,
                    abs_err: int_ht.map(|v| (v - href).abs()),
                });
            }
            entry
        })
        .collect();

    Ok(ConvergenceReport {
        arithmetic_progression: is_arithmetic(half_periods),
        entries,
    })
}

/// A positive `h11` profile for block averaging.
#[derive(Clone)]
pub enum H11Profile {
    /// `scale · e^{rate·t}`
    Exp { scale: f64, rate: f64 },
    /// `Σ_k c_k t^k`
    Polynomial(Vec<f64>),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for H11Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            H11Profile::Exp { scale, rate } => write!(f, "Exp {{ scale: {scale}, rate: {rate} }}"),
            H11Profile::Polynomial(c) => write!(f, "Polynomial({c:?})"),
            H11Profile::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl H11Profile {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            H11Profile::Exp { scale, rate } => scale * (rate * t).exp(),
            H11Profile::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck),
            H11Profile::Custom(f) => f(t),
        }
    }

    /// `(1/(b−a)) ∫_a^b h11`.
    fn average(&self, a: f64, b: f64) -> Result<f64> {
        let w = b - a;
        match self {
            H11Profile::Exp { scale, rate } => {
                let x = rate * w;
                let factor = if x == 0.0 { 1.0 } else { x.exp_m1() / x };
                Ok(scale * (rate * a).exp() * factor)
            }
            H11Profile::Polynomial(c) => {
                let anti = |t: f64| {
                    c.iter()
                        .enumerate()
                        .rev()
                        .fold(0.0, |acc, (k, &ck)| acc * t + ck / (k + 1) as f64)
                        * t
                };
                Ok((anti(b) - anti(a)) / w)
            }
            H11Profile::Custom(f) => Ok(quad::integrate(|t| f(t), a, b, 1e-13)? / w),
        }
    }
}

/// `N` diagonal steps of length `T` with values `(1/T) ∫_{nT}^{(n+1)T} h11`.
pub fn dirac_step_hamiltonian(profile: &H11Profile, step: f64, n: usize) -> Result<StepHamiltonian> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!("step length {step} must be positive")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("need at least one step".into()));
    }
    let values = (0..n)
        .map(|k| {
            let v = profile.average(k as f64 * step, (k + 1) as f64 * step)?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("block average {v} on step {k} is not positive")));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    StepHamiltonian::diagonal(step, &values)
}

/// Verblunsky coefficients and moments of the block-averaged Hamiltonian:
/// `N` steps give `α_0..α_{N−2}` and `γ_0..γ_{N−1}`.
pub fn dirac_direct_spectrum(profile: &H11Profile, step: f64, n: usize) -> Result<(VerblunskySeq, MomentSequence)> {
    let h = dirac_step_hamiltonian(profile, step, n)?;
    let v = verblunsky_from_steps(&h)?;
    let m = direct_moments(&h, n - 1)?;
    Ok((v, m))
}

/// Lower band edge `arcsin|α| / T` of the spectrum of `h11 = e^t` averaged
/// over blocks of length `T`, on the line scale. Tends to `1/2` as `T → 0`.
pub fn exp_growth_band_edge(step: f64) -> f64 {
    let alpha = -(step / 2.0).tanh();
    alpha.abs().asin() / step
}

/// Density on the line of the block-averaged `h11 = e^t` spectrum,
/// `γ_0 w(2Tx)`. Tends to `√(4x²−1)/(2|x|)` as `T → 0`.
pub fn exp_growth_line_density(step: f64, x: f64) -> f64 {
    let alpha = -(step / 2.0).tanh();
    let gamma0 = step / step.exp_m1();
    let theta = 2.0 * step * x;
    let s = (theta / 2.0).sin().abs();
    let inner = s * s - alpha * alpha;
    if inner <= 0.0 {
        return 0.0;
    }
    gamma0 * inner.sqrt() / (s * (1.0 + alpha))
}

/// Empirical ratio between the periodized `h11` of the homogeneous measure
/// `(c₁ + c₂ sign x) dx` and the closed-form constant `C₁`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationCheck {
    pub half_period: f64,
    pub closed_form_c1: f64,
    /// `(1/t_max) ∫_0^{t_max} h_T`.
    pub mean_h11: f64,
    pub ratio: f64,
}

pub fn homogeneous_normalization_ratio(c1: f64, c2: f64, half_period: f64, t_max: f64) -> Result<NormalizationCheck> {
    let k = homogeneous_constants(c1, c2)?;
    let spec = MeasureSpec::with_density(crate::measure::Density::Homogeneous { c1, c2 });
    let n = default_order(t_max, half_period);
    let rec = inverse_via_periodization(&spec, half_period, n)?;
    let span = t_max.min(rec.hamiltonian.t_max());
    let mean = rec
        .hamiltonian
        .integral_h11(0.0, span)
        .ok_or_else(|| Error::DomainError("empty approximant".into()))?
        / span;
    Ok(NormalizationCheck {
        half_period,
        closed_form_c1: k.c1,
        mean_h11: mean,
        ratio: mean / k.c1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::pointmass_hamiltonian;

    fn point_mass_spec() -> MeasureSpec {
        MeasureSpec::lebesgue(1.0 / (2.0 * PI).sqrt()).with_atom(0.0, (2.0 * PI).sqrt())
    }

    #[test]
    fn point_mass_steps() {
        for t in [PI, 2.0 * PI] {
            let rec = inverse_via_periodization(&point_mass_spec(), t, 20).unwrap();
            assert!(rec.breakdown.is_none());
            for (n, s) in rec.hamiltonian.steps().iter().enumerate() {
                let nf = n as f64;
                let expect = (2.0 * PI).sqrt() * t * t / ((nf * PI + t) * (nf * PI + t + PI));
                assert!((s.h11 - expect).abs() <= 1e-9 * expect, "T={t} n={n}");
                assert_eq!(s.g, 0.0);
            }
        }
    }

    #[test]
    fn lebesgue_is_identity() {
        for t in [1.0, PI, 10.0] {
            let rec = inverse_via_periodization(&MeasureSpec::lebesgue(1.0), t, 8).unwrap();
            assert!(rec.hamiltonian.h11().iter().all(|h| (h - 1.0).abs() < 1e-12));
            assert!((rec.hamiltonian.step_length() - PI / (2.0 * t)).abs() < 1e-15);
        }
    }

    #[test]
    fn finite_support_is_rejected() {
        let spec = MeasureSpec::with_density(crate::measure::Density::None).with_atom(0.0, 1.0);
        let err = inverse_via_periodization(&spec, PI, 4).unwrap_err();
        assert!(matches!(err, Error::AtHalfPeriod { .. }));
    }

    #[test]
    fn sweep_point_mass_improves() {
        let reference = Reference::Function(pointmass_hamiltonian(1.0 / (2.0 * PI).sqrt(), (2.0 / PI).sqrt()).unwrap());
        let report = convergence_sweep(
            &point_mass_spec(),
            &[PI, 8.0 * PI],
            &reference,
            // off-grid ends: on grid points the step integrals are exact
            &[(0.3, 2.9)],
            Some(3.0),
            DEFAULT_PD_TOL,
        )
        .unwrap();
        let errs = report.errors_on(0);
        assert!(errs[1].unwrap() < errs[0].unwrap());
        assert!(!report.arithmetic_progression);
        assert!(report.to_csv().starts_with("T,interval_a,interval_b,int_hT,int_href,abs_err\n"));
    }

    #[test]
    fn arithmetic_detection() {
        assert!(is_arithmetic(&[2.0, 4.0, 6.0]));
        assert!(!is_arithmetic(&[2.0, 4.0, 8.0]));
        assert!(!is_arithmetic(&[]));
    }

    #[test]
    fn block_averages() {
        let h = dirac_step_hamiltonian(&H11Profile::Polynomial(vec![1.0, 1.0]), 1.0, 4).unwrap();
        assert_eq!(h.h11(), vec![1.5, 2.5, 3.5, 4.5]);
        let c = dirac_step_hamiltonian(&H11Profile::Polynomial(vec![2.5]), 0.3, 3).unwrap();
        assert!(c.h11().iter().all(|v| (v - 2.5).abs() < 1e-15));
        let custom = H11Profile::Custom(Arc::new(|t: f64| 1.0 + t));
        let q = dirac_step_hamiltonian(&custom, 1.0, 4).unwrap();
        for (a, b) in q.h11().iter().zip([1.5, 2.5, 3.5, 4.5]) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(dirac_step_hamiltonian(&H11Profile::Polynomial(vec![-1.0]), 1.0, 2).is_err());
    }

    #[test]
    fn exp_growth() {
        let step = 0.7;
        let (v, m) = dirac_direct_spectrum(&H11Profile::Exp { scale: 1.0, rate: 1.0 }, step, 10).unwrap();
        let expect = (1.0 - f64::exp(step)) / (1.0 + f64::exp(step));
        assert!(v.alpha.iter().all(|a| (a.re - expect).abs() < 1e-12));
        assert_eq!(m.order(), 9);
        let (v, _) = dirac_direct_spectrum(&H11Profile::Polynomial(vec![1.0]), step, 5).unwrap();
        assert!(v.alpha.iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn exp_growth_small_step_limit() {
        assert!((exp_growth_band_edge(1e-4) - 0.5).abs() < 1e-8);
        for x in [0.6, 1.0, 3.0] {
            let limit = (4.0 * x * x - 1.0_f64).sqrt() / (2.0 * x);
            assert!((exp_growth_line_density(1e-4, x) - limit).abs() < 1e-3);
        }
        assert_eq!(exp_growth_line_density(1e-4, 0.3), 0.0);
    }

    #[test]
    fn homogeneous_even_ratio() {
        let r = homogeneous_normalization_ratio(2.0, 0.0, 4.0 * PI, 2.0).unwrap();
        assert!((r.mean_h11 - 0.5).abs() < 1e-10);
        assert!((r.ratio - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-10);
    }
}
