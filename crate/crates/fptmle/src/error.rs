use thiserror::Error;

/// Errors surfaced by the numerical and statistical layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the state space or parameter domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A special-function evaluation lost precision or overflowed.
    /// Likelihood code maps this to an `eval_ok = false` sentinel.
    #[error("evaluation failure: {0}")]
    EvalFailure(String),

    /// Adaptive quadrature exhausted its depth budget.
    #[error("quadrature failed to converge: {0}")]
    QuadratureNonConvergence(String),

    /// A simulation or series diverged (runaway trajectory, non-finite sum).
    #[error("divergence: {0}")]
    Divergence(String),

    /// A matrix was numerically singular where a positive determinant was required.
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// Invalid input data (trajectory invariant violations and the like).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
