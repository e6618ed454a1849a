use std::path::Path;

use crate::error::{Error, Result};
use crate::la::{mm_read, SparseMatrix};

use super::assembly::{assemble_mass, assemble_stiffness};
use super::config::ProblemConfig;
use super::mesh::Mesh2D;

const SYMMETRY_TOL: f64 = 1e-12;

/// Spatial mass and stiffness matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceOperators {
    pub mass: SparseMatrix,
    pub stiffness: SparseMatrix,
}

impl SpaceOperators {
    pub fn new(mass: SparseMatrix, stiffness: SparseMatrix) -> Result<Self> {
        let ops = Self { mass, stiffness };
        ops.validate()?;
        Ok(ops)
    }

    pub fn from_mesh(mesh: &Mesh2D, config: &ProblemConfig) -> Result<Self> {
        Self::new(assemble_mass(mesh)?, assemble_stiffness(mesh, config)?)
    }

    /// Loads `M.mtx` and `K.mtx` from `dir`. `K` is taken as given (including
    /// ν); elliptic regularization adds `ε·M` on top.
    pub fn import(dir: impl AsRef<Path>, config: &ProblemConfig) -> Result<Self> {
        let dir = dir.as_ref();
        let mass = mm_read(dir.join("M.mtx"))?;
        let mut stiffness = mm_read(dir.join("K.mtx"))?;
        let eps = config.stiffness_regularization();
        if eps > 0.0 {
            if stiffness.n_rows() != mass.n_rows() || stiffness.n_cols() != mass.n_cols() {
                return Err(Error::DimensionMismatch(format!(
                    "K is {}x{} but M is {}x{}",
                    stiffness.n_rows(),
                    stiffness.n_cols(),
                    mass.n_rows(),
                    mass.n_cols()
                )));
            }
            stiffness = SparseMatrix::linear_combination(1.0, &stiffness, eps, &mass)?;
        }
        Self::new(mass, stiffness)
    }

    pub fn n(&self) -> usize {
        self.mass.n_rows()
    }

    /// Structural checks: square, conformal, symmetric, positive mass diagonal.
    pub fn validate(&self) -> Result<()> {
        let (m, k) = (&self.mass, &self.stiffness);
        if !m.is_square() || !k.is_square() || m.n_rows() != k.n_rows() {
            return Err(Error::DimensionMismatch(format!(
                "M is {}x{}, K is {}x{}; both must be square of equal size",
                m.n_rows(),
                m.n_cols(),
                k.n_rows(),
                k.n_cols()
            )));
        }
        for a in [m, k] {
            if let Some((row, col)) = a.asymmetry(SYMMETRY_TOL) {
                return Err(Error::NotSymmetric { row, col });
            }
        }
        if let Some((i, &d)) = m.diagonal().iter().enumerate().find(|(_, &d)| !(d > 0.0)) {
            return Err(Error::NotPositiveDefinite {
                column: i,
                pivot: d,
            });
        }
        Ok(())
    }
}
