use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the linear-algebra kernels, discretization and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric positive definite: pivot {pivot:e} at column {column}")]
    NotPositiveDefinite { column: usize, pivot: f64 },

    #[error("matrix is not symmetric (entry ({row}, {col}) differs from its transpose)")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is singular to working precision (no acceptable pivot in column {column})")]
    Singular { column: usize },

    #[error("real Schur iteration did not converge for a {n}x{n} matrix")]
    SchurNoConvergence { n: usize },

    #[error(
        "Sylvester equation is (nearly) singular: eigenvalue {re:e}{im:+e}i of the left \
         coefficient nearly cancels an eigenvalue of the right coefficient"
    )]
    SylvesterSingular { re: f64, im: f64 },

    #[error("{path}:{line}: {message}")]
    MatrixMarket {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: {message}")]
    TableParse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("triangle {index} is degenerate (signed area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("unknown desired-state example `{0}` (expected ex1, ex2 or file)")]
    UnknownExample(String),

    #[error(
        "K + sM is not positive definite (shift s = {shift}); increase --shift or --ereg: {source}"
    )]
    ShiftedNotSpd {
        shift: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("dense system would need {entries} entries, above the guard of {limit}")]
    SizeGuard { entries: usize, limit: usize },

    #[error("initial Krylov basis is empty: the right-hand side deflated to nothing")]
    EmptyBasis,

    #[error("Krylov bases deflated completely after {sweeps} sweeps before convergence")]
    Stagnation { sweeps: usize },

    #[error("time step {step}: MINRES did not converge (relative residual {residual:e})")]
    StepNotConverged { step: usize, residual: f64 },

    #[error("MINRES breakdown: preconditioner is not positive definite (gamma^2 = {0:e})")]
    IndefinitePreconditioner(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
