//! Dense and sparse linear-algebra kernels.

pub mod cholesky;
pub mod factor;
pub mod gram_schmidt;
pub mod lowrank;
pub mod lu;
pub mod mm;
pub mod ordering;
pub mod schur;
pub mod sparse;
pub mod sylvester;

/// Column-major dense matrix.
pub type DenseMatrix = nalgebra::DMatrix<f64>;

pub use factor::{
    sparse_lu_factorize, sparse_spd_factorize, FactorizationKind, SparseFactorization,
};
pub use gram_schmidt::mgs_orthonormalize;
pub use lowrank::{
    compress_dense, truncate_frobenius, truncate_frobenius_above, truncate_to, truncated_svd,
    truncated_svd_values, LowRankMatrix, Truncation,
};
pub use mm::{mm_read, mm_read_dense, mm_write, mm_write_dense};
pub use schur::real_schur;
pub use sparse::SparseMatrix;
pub use sylvester::solve_sylvester_dense;
