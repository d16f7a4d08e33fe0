use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Error)]
pub enum EitError {
    /// Parameter set fails a validity invariant (negative rate, etc).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An operation required a nonzero control field or probe.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A closed-form denominator vanished.
    #[error("degenerate denominator at omega = {omega}")]
    DegenerateDenominator { omega: f64 },

    /// The steady-state solver did not converge within its budget.
    #[error("steady-state solver failed to converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    /// Bisection found no root in the search bracket.
    #[error("no root in search bracket: {0}")]
    NoRoot(String),

    /// Frequency grids of two series do not match.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Rate scales differ by more than the integrator's stiffness budget.
    #[error("stiffness ratio {ratio:.3e} exceeds the integrator budget of 1e6")]
    StiffnessExceeded { ratio: f64 },

    /// Adaptive step size fell below the floor.
    #[error("step size underflow at t = {t:.6e} (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },

    /// Conditional variance on a zero-variance quadrature.
    #[error("degenerate conditioning: conditioning quadrature has zero variance")]
    DegenerateConditioning,
}

pub type Result<T> = std::result::Result<T, EitError>;
