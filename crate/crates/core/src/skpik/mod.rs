//! Two-sided extended Krylov solver for the Sylvester form.

mod report;
mod residual;
mod solver;

pub use report::SolveReport;
pub use residual::factored_residual;
pub use solver::{skpik_init, skpik_solve, skpik_sweep, KpikState};
