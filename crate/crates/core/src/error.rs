use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("density is negative ({value:.3e}) at x = {x}")]
    NegativeDensity { x: f64, value: f64 },

    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },

    #[error("restriction to [-{half_period}, {half_period}) is the zero measure")]
    EmptyPeriod { half_period: f64 },

    #[error("need moments up to order {needed}, only {available} available")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("matrix is not positive definite (positivity held through order {last_good:?})")]
    NotPositiveDefinite { last_good: Option<usize> },

    #[error("recursion broke down at order {order} (innovation {innovation:.3e})")]
    BreakdownAtOrder { order: usize, innovation: f64 },

    #[error("expected a real result, got {re} + {im}i")]
    NonRealResult { re: f64, im: f64 },

    #[error("length mismatch: {left} h-steps vs {right} g-steps")]
    LengthMismatch { left: usize, right: usize },

    #[error("Hamiltonian is not diagonal (g = {g} at step {step})")]
    NonDiagonalHamiltonian { step: usize, g: f64 },

    #[error("dual/primal ratio has vanishing real part at order {order}")]
    DegenerateRatio { order: usize },

    #[error("alpha + S_t B is numerically singular at t = {t}")]
    SingularSystem { t: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("power series did not converge within {terms} terms")]
    SeriesDivergence { terms: usize },

    #[error("at half-period T = {half_period}: {source}")]
    AtHalfPeriod {
        half_period: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures caused by loss of positivity or numerical breakdown,
    /// as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NegativeDensity { .. }
            | Error::InvalidMeasure(_)
            | Error::InvalidInput(_)
            | Error::InsufficientMoments { .. }
            | Error::LengthMismatch { .. }
            | Error::NonDiagonalHamiltonian { .. }
            | Error::DomainError(_)
            | Error::EmptyPeriod { .. } => false,
            Error::AtHalfPeriod { source, .. } => source.is_numerical(),
            _ => true,
        }
    }
}
