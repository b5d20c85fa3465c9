use thiserror::Error;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HurwitzError {
    /// Operands live in incompatible spaces (variable contexts, series orders, partition weights).
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration would exceed the configured work bound.
    #[error("work bound exceeded: estimated {estimated} > bound {bound}")]
    Capacity { estimated: u128, bound: u128 },
    /// A constructed object violates its invariants.
    #[error("validation failed: {0}")]
    Validation(String),
    /// A closed-form expression is singular at the requested point.
    #[error("singular evaluation: {0}")]
    Singularity(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HurwitzError>;
