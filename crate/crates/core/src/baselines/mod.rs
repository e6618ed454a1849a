//! Comparison solvers: low-rank preconditioned MINRES on the reduced
//! all-at-once system and sequential per-step MINRES.

mod dense;
mod fminres;
mod lowrank_vector;
mod lrminres;
mod minres;
mod schur_hat;

pub use dense::DenseSpace;
pub use fminres::{fminres_solve, fminres_step, StepSystem};
pub use lowrank_vector::{lowrank_axpy_truncate, LowRankVector};
pub use lrminres::{
    lowrank_rhs, lrminres_solve, lrminres_solve_observed, LowRankKktSpace, DEFAULT_MAX_RANK,
};
pub use minres::{minres, MinresOptions, MinresOutcome, MinresSpace};
pub use schur_hat::{apply_schur_hat_inv, SchurHatApprox};

use crate::la::{compress_dense, truncate_to, DenseMatrix, LowRankMatrix};

/// Rank of `[Y, Z]` after dropping singular values below `threshold`.
pub(crate) fn joint_rank(
    state: &LowRankMatrix,
    multiplier: &LowRankMatrix,
    threshold: f64,
) -> usize {
    let (n, m_t) = (state.n_rows(), state.n_cols());
    let (ks, km) = (state.rank(), multiplier.rank());
    let mut left = DenseMatrix::zeros(n, ks + km);
    left.columns_mut(0, ks).copy_from(state.left());
    left.columns_mut(ks, km).copy_from(multiplier.left());
    let mut right = DenseMatrix::zeros(2 * m_t, ks + km);
    right.view_mut((0, 0), (m_t, ks)).copy_from(state.right());
    right
        .view_mut((m_t, ks), (m_t, km))
        .copy_from(multiplier.right());
    let joint = LowRankMatrix::new(left, right).expect("conformal factors");
    truncate_to(&joint, threshold, usize::MAX).matrix.rank()
}

pub(crate) fn joint_rank_dense(
    state: &DenseMatrix,
    multiplier: &DenseMatrix,
    threshold: f64,
) -> usize {
    let joint = compress_dense(
        &DenseMatrix::from_columns(
            &state
                .column_iter()
                .chain(multiplier.column_iter())
                .collect::<Vec<_>>(),
        ),
        0.0,
        usize::MAX,
    );
    truncate_to(&joint, threshold, usize::MAX).matrix.rank()
}
