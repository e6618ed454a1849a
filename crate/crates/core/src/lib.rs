//! Low-rank solvers for all-at-once discretized parabolic optimal control.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod discretize;
pub mod error;
pub mod la;
pub mod reformulate;
pub mod skpik;

pub use error::{Error, Result};
