use thiserror::Error;

/// Errors produced by parameter validation, special functions and the solver.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or iteration did not converge within its budget.
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    /// An operation was called before its inputs were ready.
    #[error("precondition violation: {0}")]
    Precondition(String),

    /// The right-hand side returned a non-finite value.
    #[error("non-finite rhs at t = {t} (component {component})")]
    NonFiniteRhs { t: f64, component: usize },

    /// Initial data outside the feasible region of the epidemic model.
    #[error("initial data ({u0}, {v0}) outside the feasible region (u+v <= {bound})")]
    OutsideFeasibleRegion { u0: f64, v0: f64, bound: f64 },

    /// Bisection bracket does not contain a sign change.
    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),

    /// I/O failure while reading or writing report files.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
