//! Sylvester-equation form of the optimality system and dense oracles.

mod kkt;
mod problem;
mod rhs;
mod solution;
mod time;

pub use kkt::{
    assemble_kkt3_dense, assemble_kkt_dense, kkt_vector, matrix_equation_kronecker,
    solve_sylvester_kronecker, sylvester_kronecker, KktForm, KktSystem, DENSE_ENTRY_LIMIT,
};
pub use problem::{SpatialOperator, SylvesterProblem};
pub use rhs::build_rhs;
pub use solution::{extract_solution, OptimalControl};
pub use time::{build_b, build_b_shifted, time_difference};
