//! Command-line front end: problem generation, single solves, parameter
//! sweeps and oracle verification.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod generate;
pub mod options;
pub mod output;
pub mod point;
pub mod sweep;
pub mod verify;

pub use error::{CliError, CliResult};
