//! Error type shared across the solver library.

use std::fmt;

/// Failure modes surfaced by the solver and its drivers.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    /// A constructor or operation received parameters outside its domain.
    InvalidParameter(String),
    /// A distribution produced a non-positive density where positivity is required.
    NonpositiveDensity { cell: usize, rho: f64 },
    /// An input left the mathematical domain of a special function or functional.
    DomainViolation(String),
    /// The Bose constitutive system was asked for a state beyond the z → 1 limit.
    DegenerateBose { target: f64, limit: f64 },
    /// Root finding failed to converge within the iteration budget.
    NonConvergence { iterations: usize, residual: f64 },
    /// A field developed NaN/Inf entries; payload locates the first offender.
    NumericalBlowup { step: usize, cell: usize },
    /// Configuration file or CLI flag failure, with a field-level message.
    Config(String),
    /// Output I/O failure, surfaced verbatim.
    Io(String),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            SolverError::NonpositiveDensity { cell, rho } => {
                write!(f, "non-positive density {rho:.6e} in cell {cell}")
            }
            SolverError::DomainViolation(msg) => write!(f, "domain violation: {msg}"),
            SolverError::DegenerateBose { target, limit } => write!(
                f,
                "degenerate Bose state: constitutive target {target:.6e} exceeds the z->1 limit {limit:.6e}"
            ),
            SolverError::NonConvergence { iterations, residual } => write!(
                f,
                "root finding did not converge after {iterations} iterations (residual {residual:.3e})"
            ),
            SolverError::NumericalBlowup { step, cell } => {
                write!(f, "NaN/Inf detected at step {step}, cell {cell}")
            }
            SolverError::Config(msg) => write!(f, "config error: {msg}"),
            SolverError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl SolverError {
    /// Rewrites the spatial-cell payload on cell-indexed variants. Moment
    /// routines see one velocity field at a time and report cell 0; spatial
    /// drivers use this to restore the actual cell index.
    pub fn with_cell(self, cell: usize) -> Self {
        match self {
            SolverError::NonpositiveDensity { rho, .. } => {
                SolverError::NonpositiveDensity { cell, rho }
            }
            other => other,
        }
    }
}

impl std::error::Error for SolverError {}

impl From<std::io::Error> for SolverError {
    fn from(e: std::io::Error) -> Self {
        SolverError::Io(e.to_string())
    }
}
