//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by graph construction, parsing, and elementary operations.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),
    #[error("unknown edge id {0}")]
    UnknownEdge(u32),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
}

/// Errors raised by the exact oracles.
#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enumeration budget of {budget} steps exceeded")]
    BudgetExceeded { budget: usize },
    #[error("unsupported cap {0} (must be 1..=3)")]
    BadCap(usize),
    #[error("unsupported bound {0} (must be <= 6)")]
    BadBound(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors raised by subdivision-model operations.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model invariant violated: {0}")]
    Invalid(String),
    #[error("structure violation in {step}: {explanation}")]
    Structure { step: String, explanation: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors raised by the certificate pipeline.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("structure violation at step {step}: {explanation}")]
    StructureViolation { step: String, explanation: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
