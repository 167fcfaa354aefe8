use thiserror::Error;

/// Errors raised by the numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),
    /// A denominator or exponent degenerates at this parameter.
    #[error("singular parameter: {0}")]
    Singular(String),
    /// Parameter record violates the hypotheses of its inequality.
    #[error("invalid parameters: {0}")]
    Invalid(String),
    /// Integrand is not integrable with the declared endpoint behavior.
    #[error("divergent integral: {0}")]
    Divergence(String),
    /// Refinement budget exhausted before the tolerance was met.
    #[error("quadrature did not converge: best estimate {estimate:e}, error estimate {err_estimate:e}")]
    Convergence { estimate: f64, err_estimate: f64 },
    /// Input makes a quotient undefined (zero denominator and the like).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Linear algebra breakdown.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Bad configuration file, suite name or CLI combination.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
