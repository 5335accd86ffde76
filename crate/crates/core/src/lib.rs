//! Direct and inverse spectral problems for 2×2 canonical systems whose
//! spectral measures are periodic, or are approximated by periodic ones.
//!
//! The inverse problem (measure → Hamiltonian) is solved by two independent
//! routes: summed inverses of Toeplitz moment matrices ([`toeplitz`],
//! [`inverse`]) and orthogonal polynomials on the unit circle ([`opuc`]).
//! The direct problem for diagonal step Hamiltonians goes through Verblunsky
//! coefficients. [`approx`] handles non-periodic measures by periodization
//! and non-step Hamiltonians by block averaging; [`closed_forms`] holds the
//! analytic reference solutions used to validate all of the above.

pub mod approx;
pub mod closed_forms;
pub mod error;
pub mod format;
pub mod inverse;
pub mod measure;
pub mod opuc;
pub mod quad;
pub mod toeplitz;

pub use error::{Error, Result};
pub use inverse::{assemble, recover, recover_g, recover_h, InverseSolver, Recovery, Step, StepHamiltonian, StepSeries};
pub use measure::{locally_infinite_support, periodize, trig_moments, Density, MeasureSpec, MomentSequence, PeriodicMeasure};
pub use num_complex::Complex64;
pub use opuc::{direct_moments, g_via_opuc, h_via_opuc, VerblunskySeq};
pub use toeplitz::Breakdown;
