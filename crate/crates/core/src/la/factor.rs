use crate::error::Result;
use crate::la::cholesky::SparseCholesky;
use crate::la::lu::SparseLu;
use crate::la::{DenseMatrix, SparseMatrix};

/// Which triangular factorization backs a [`SparseFactorization`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizationKind {
    Cholesky,
    Lu,
}

/// A sparse direct factorization with a fill-reducing ordering.
#[derive(Debug, Clone)]
pub enum SparseFactorization {
    Cholesky(SparseCholesky),
    Lu(SparseLu),
}

/// Cholesky factorization of a symmetric positive definite matrix.
pub fn sparse_spd_factorize(a: &SparseMatrix) -> Result<SparseFactorization> {
    SparseCholesky::factorize(a).map(SparseFactorization::Cholesky)
}

/// LU factorization with partial pivoting of a square nonsingular matrix.
pub fn sparse_lu_factorize(a: &SparseMatrix) -> Result<SparseFactorization> {
    SparseLu::factorize(a).map(SparseFactorization::Lu)
}

impl SparseFactorization {
    pub fn kind(&self) -> FactorizationKind {
        match self {
            Self::Cholesky(_) => FactorizationKind::Cholesky,
            Self::Lu(_) => FactorizationKind::Lu,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Cholesky(f) => f.dim(),
            Self::Lu(f) => f.dim(),
        }
    }

    /// The fill-reducing ordering (symmetric for Cholesky, column for LU).
    pub fn permutation(&self) -> &[usize] {
        match self {
            Self::Cholesky(f) => f.permutation(),
            Self::Lu(f) => f.column_permutation(),
        }
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        match self {
            Self::Cholesky(f) => f.solve_in_place(b),
            Self::Lu(f) => f.solve_in_place(b),
        }
    }

    pub fn solve_transpose_in_place(&self, b: &mut [f64]) {
        match self {
            Self::Cholesky(f) => f.solve_in_place(b),
            Self::Lu(f) => f.solve_transpose_in_place(b),
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_transpose_in_place(&mut x);
        x
    }

    /// Column-wise A⁻¹ B.
    pub fn solve_dense(&self, b: &DenseMatrix) -> DenseMatrix {
        let mut x = b.clone();
        for mut col in x.column_iter_mut() {
            self.solve_in_place(col.as_mut_slice());
        }
        x
    }

    /// Column-wise A⁻ᵀ B.
    pub fn solve_transpose_dense(&self, b: &DenseMatrix) -> DenseMatrix {
        let mut x = b.clone();
        for mut col in x.column_iter_mut() {
            self.solve_transpose_in_place(col.as_mut_slice());
        }
        x
    }
}
