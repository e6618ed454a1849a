//! Spatial operators, time grid and desired-state data.

mod assembly;
mod config;
mod desired;
mod mesh;
mod operators;

pub use assembly::{assemble_laplacian, assemble_mass, assemble_stiffness};
pub use config::{ProblemConfig, Regularization, RegularizationKind, TimeGrid};
pub use desired::{
    ex1_value, ex2_value, lowrank_desired, read_table, sample_desired_state, DesiredState,
};
pub use mesh::{build_mesh, Mesh2D};
pub use operators::SpaceOperators;
