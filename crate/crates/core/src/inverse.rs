//! Recovery of step Hamiltonians from the moments of a periodic spectral
//! measure.
//!
//! For a `2T`-periodic measure the Hamiltonian is constant on steps of length
//! `π/(2T)`. Its upper-left entry on step `n` is
//! `S[Γ_n^{-1}] - S[Γ_{n-1}^{-1}]` (with `h_0 = 1/γ_0`) and the off-diagonal
//! entry is the corresponding difference of `S[Δ_n Γ_n^{-1}]/i`.
//! The lower-right entry is never stored: it is `(1 + g²)/h11`, which makes
//! every step matrix have determinant one.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format;
use crate::measure::MomentSequence;
use crate::toeplitz::{self, Breakdown, DEFAULT_PD_TOL};

/// One step of a det-normalized Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub h11: f64,
    pub g: f64,
}

impl Step {
    pub fn h22(&self) -> f64 {
        (1.0 + self.g * self.g) / self.h11
    }

    pub fn det(&self) -> f64 {
        self.h11 * self.h22() - self.g * self.g
    }
}

#[derive(Deserialize)]
struct RawStepHamiltonian {
    step_length: f64,
    steps: Vec<Step>,
}

/// Hamiltonian constant on `[n s, (n+1) s)` for step length `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStepHamiltonian")]
pub struct StepHamiltonian {
    step_length: f64,
    steps: Vec<Step>,
}

impl TryFrom<RawStepHamiltonian> for StepHamiltonian {
    type Error = Error;

    fn try_from(raw: RawStepHamiltonian) -> Result<Self> {
        StepHamiltonian::new(raw.step_length, raw.steps)
    }
}

impl StepHamiltonian {
    pub fn new(step_length: f64, steps: Vec<Step>) -> Result<Self> {
        if !(step_length.is_finite() && step_length > 0.0) {
            return Err(Error::InvalidInput(format!("step length must be positive, got {step_length}")));
        }
        if let Some((i, s)) = steps
            .iter()
            .enumerate()
            .find(|(_, s)| !(s.h11.is_finite() && s.h11 > 0.0 && s.g.is_finite()))
        {
            return Err(Error::InvalidInput(format!(
                "step {i} needs finite h11 > 0 and finite g, got h11 = {}, g = {}",
                s.h11, s.g
            )));
        }
        Ok(StepHamiltonian { step_length, steps })
    }

    /// Diagonal Hamiltonian from its upper-left steps.
    pub fn diagonal(step_length: f64, h11: &[f64]) -> Result<Self> {
        Self::new(step_length, h11.iter().map(|&h| Step { h11: h, g: 0.0 }).collect())
    }

    pub fn step_length(&self) -> f64 {
        self.step_length
    }

    /// Half-period `T` of the spectral measure whose step length this is.
    pub fn half_period(&self) -> f64 {
        PI / (2.0 * self.step_length)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn h11(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.h11).collect()
    }

    pub fn g(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.g).collect()
    }

    /// End of the covered range.
    pub fn t_max(&self) -> f64 {
        self.step_length * self.steps.len() as f64
    }

    pub fn is_diagonal(&self) -> bool {
        self.steps.iter().all(|s| s.g == 0.0)
    }

    /// Step containing `t`, if covered.
    pub fn step_at(&self, t: f64) -> Option<&Step> {
        if t < 0.0 {
            return None;
        }
        self.steps.get((t / self.step_length).floor() as usize)
    }

    /// `∫_a^b h11(t) dt`, exact for the step function. `None` when `[a, b]`
    /// is not covered.
    pub fn integral_h11(&self, a: f64, b: f64) -> Option<f64> {
        if a < 0.0 || b > self.t_max() * (1.0 + 1e-14) || b < a {
            return None;
        }
        let s = self.step_length;
        let first = (a / s).floor() as usize;
        let mut total = 0.0;
        for (n, step) in self.steps.iter().enumerate().skip(first) {
            let lo = (n as f64 * s).max(a);
            let hi = ((n + 1) as f64 * s).min(b);
            if hi <= lo {
                if lo >= b {
                    break;
                }
                continue;
            }
            total += step.h11 * (hi - lo);
        }
        Some(total)
    }

    /// CSV rows `t_start,t_end,h11,g,h22`.
    pub fn to_csv(&self) -> String {
        format::csv(
            &["t_start", "t_end", "h11", "g", "h22"],
            self.steps.iter().enumerate().map(|(n, st)| {
                vec![
                    format::num(n as f64 * self.step_length),
                    format::num((n + 1) as f64 * self.step_length),
                    format::num(st.h11),
                    format::num(st.g),
                    format::num(st.h22()),
                ]
            }),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("step Hamiltonian serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

/// Per-step values, possibly cut short by a loss of positivity.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSeries {
    pub values: Vec<f64>,
    pub breakdown: Option<Breakdown>,
}

impl StepSeries {
    /// Fail on a truncated series.
    pub fn into_result(self) -> Result<Vec<f64>> {
        match self.breakdown {
            Some(b) => Err(b.into()),
            None => Ok(self.values),
        }
    }
}

/// A recovered Hamiltonian, possibly truncated before the requested order.
#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    pub hamiltonian: StepHamiltonian,
    pub breakdown: Option<Breakdown>,
}

/// Toeplitz-route solver with a configurable positivity threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSolver {
    /// Innovation variances must exceed `pd_tol · γ_0`.
    pub pd_tol: f64,
}

impl Default for InverseSolver {
    fn default() -> Self {
        InverseSolver { pd_tol: DEFAULT_PD_TOL }
    }
}

impl InverseSolver {
    pub fn new(pd_tol: f64) -> Self {
        InverseSolver { pd_tol }
    }

    pub fn recover_h(&self, m: &MomentSequence, n: usize) -> Result<StepSeries> {
        let sweep = toeplitz::levinson_solve_ones(m, n, self.pd_tol)?;
        Ok(StepSeries {
            values: differences(&sweep.sums),
            breakdown: sweep.breakdown,
        })
    }

    pub fn recover_g(&self, m: &MomentSequence, n: usize) -> Result<StepSeries> {
        let sweep = toeplitz::levinson_solve_ones(m, n, self.pd_tol)?;
        Ok(StepSeries {
            values: g_steps(m, &sweep.solutions)?,
            breakdown: sweep.breakdown,
        })
    }

    /// Both entries from a single sweep, assembled on the `π/(2T)` grid.
    pub fn recover(&self, m: &MomentSequence, n: usize) -> Result<Recovery> {
        let sweep = toeplitz::levinson_solve_ones(m, n, self.pd_tol)?;
        let h = differences(&sweep.sums);
        let g = g_steps(m, &sweep.solutions)?;
        Ok(Recovery {
            hamiltonian: assemble(&h, &g, m.half_period())?,
            breakdown: sweep.breakdown,
        })
    }

    /// Same as [`recover`](Self::recover) through dense factorizations.
    pub fn recover_dense(&self, m: &MomentSequence, n: usize) -> Result<Recovery> {
        let (sums, delta_sums, breakdown) = toeplitz::dense_sums(m, n, self.pd_tol)?;
        let h = differences(&sums);
        let mut g = differences(&delta_sums);
        if let Some(g0) = g.first_mut() {
            *g0 = 0.0;
        }
        Ok(Recovery {
            hamiltonian: assemble(&h, &g, m.half_period())?,
            breakdown,
        })
    }
}

fn differences(sums: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(sums.len());
    let mut prev = 0.0;
    for &s in sums {
        out.push(s - prev);
        prev = s;
    }
    out
}

fn g_steps(m: &MomentSequence, solutions: &[Vec<num_complex::Complex64>]) -> Result<Vec<f64>> {
    let delta: Vec<f64> = solutions
        .iter()
        .map(|x| toeplitz::delta_sum_from_solution(m, x))
        .collect::<Result<_>>()?;
    let mut g = differences(&delta);
    g[0] = 0.0;
    Ok(g)
}

/// `h_0..h_N` by the Toeplitz route with the default threshold.
pub fn recover_h(m: &MomentSequence, n: usize) -> Result<StepSeries> {
    InverseSolver::default().recover_h(m, n)
}

/// `g_0..g_N` by the Toeplitz route with the default threshold.
pub fn recover_g(m: &MomentSequence, n: usize) -> Result<StepSeries> {
    InverseSolver::default().recover_g(m, n)
}

pub fn recover(m: &MomentSequence, n: usize) -> Result<Recovery> {
    InverseSolver::default().recover(m, n)
}

/// Step Hamiltonian for a measure of half-period `half_period`.
pub fn assemble(h: &[f64], g: &[f64], half_period: f64) -> Result<StepHamiltonian> {
    if h.len() != g.len() {
        return Err(Error::LengthMismatch {
            left: h.len(),
            right: g.len(),
        });
    }
    if !(half_period.is_finite() && half_period > 0.0) {
        return Err(Error::InvalidInput(format!("half-period must be positive, got {half_period}")));
    }
    StepHamiltonian::new(
        PI / (2.0 * half_period),
        h.iter().zip(g).map(|(&h11, &g)| Step { h11, g }).collect(),
    )
}
