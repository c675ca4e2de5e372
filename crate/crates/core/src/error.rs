use thiserror::Error;

/// Errors raised by the integral evaluators, the oracle and the inverse solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    /// An input lies outside the documented parameter domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The evaluation point reaches the branch point `b` where the integrands diverge.
    #[error("singularity: |tau| = {tau} is not below the branch point b = {b}")]
    Singularity { tau: f64, b: f64 },

    /// A summation or table index outside its admissible range.
    #[error("index error: {0}")]
    Index(String),

    /// No evaluation route exists for this `(beta, k)` pair.
    #[error("unsupported integral I(beta = {}, k = {k})", *.two_beta as f64 / 2.0)]
    Unsupported { two_beta: i32, k: u32 },

    #[error("quadrature reached {subdivisions} subdivisions with error estimate {err_estimate:e}")]
    Quadrature {
        subdivisions: usize,
        value: f64,
        err_estimate: f64,
    },

    #[error("no bracket: target {target} is outside the attainable range [0, {attainable}] for c in [0, {c_upper}]")]
    NoBracket {
        target: f64,
        attainable: f64,
        c_upper: f64,
    },

    #[error("longitude difference is not monotone in c on [0, {c_upper}]")]
    NonMonotone { c_upper: f64 },

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

impl GeoError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GeoError::Domain(msg.into())
    }

    /// True for errors caused by the caller's inputs rather than by a failing numerical method.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            GeoError::Domain(_)
                | GeoError::Singularity { .. }
                | GeoError::Index(_)
                | GeoError::Unsupported { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, GeoError>;
