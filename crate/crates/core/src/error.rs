use thiserror::Error;

/// Errors surfaced by the numeric routines.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An argument fell outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A root or branch value does not exist for the given arguments.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// An iterative solver stopped before reaching its tolerance.
    #[error("solver did not converge: {reason} (grad_norm={grad_norm:.3e})")]
    NonConvergence {
        reason: String,
        grad_norm: f64,
        /// Best iterate found, in solver order.
        best: Vec<f64>,
    },

    /// Training produced a non-finite loss.
    #[error("training diverged at iteration {iteration} (loss={loss})")]
    Divergence {
        iteration: usize,
        loss: f64,
        trace: Vec<f64>,
    },

    /// A matrix factorization or other numeric kernel failed.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
