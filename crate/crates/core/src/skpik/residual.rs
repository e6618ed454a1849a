use crate::error::{Error, Result};
use crate::la::DenseMatrix;
use crate::reformulate::SylvesterProblem;

/// `‖A·x1·x2ᵀ + x1·x2ᵀ·B − R₁R₂ᵀ‖_F / ‖R₁R₂ᵀ‖_F` without forming any
/// `n × 2m_T` matrix. Falls back to the absolute norm when the RHS is zero.
pub fn factored_residual(
    x1: &DenseMatrix,
    x2: &DenseMatrix,
    problem: &SylvesterProblem,
) -> Result<f64> {
    if x1.nrows() != problem.n() || x2.nrows() != problem.n_cols() || x1.ncols() != x2.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "factors {}x{} and {}x{} do not fit an {}x{} unknown",
            x1.nrows(),
            x1.ncols(),
            x2.nrows(),
            x2.ncols(),
            problem.n(),
            problem.n_cols()
        )));
    }
    let ax1 = problem.apply_a(x1);
    let btx2 = problem.apply_bt(x2);
    Ok(relative(
        residual_norm(&ax1, x1, x2, &btx2, problem.r1(), problem.r2()),
        problem.rhs_norm(),
    ))
}

pub(crate) fn relative(absolute: f64, rhs_norm: f64) -> f64 {
    if rhs_norm > 0.0 {
        absolute / rhs_norm
    } else {
        absolute
    }
}

/// `‖[Ax1, x1, −R₁]·[x2, Bᵀx2, R₂]ᵀ‖_F` through the triangular QR cores.
pub(crate) fn residual_norm(
    ax1: &DenseMatrix,
    x1: &DenseMatrix,
    x2: &DenseMatrix,
    btx2: &DenseMatrix,
    r1: &DenseMatrix,
    r2: &DenseMatrix,
) -> f64 {
    let (k, r) = (x1.ncols(), r1.ncols());
    let width = 2 * k + r;
    if width == 0 {
        return 0.0;
    }
    let mut left = DenseMatrix::zeros(x1.nrows(), width);
    left.columns_mut(0, k).copy_from(ax1);
    left.columns_mut(k, k).copy_from(x1);
    left.columns_mut(2 * k, r).copy_from(&(-r1));
    let mut right = DenseMatrix::zeros(x2.nrows(), width);
    right.columns_mut(0, k).copy_from(x2);
    right.columns_mut(k, k).copy_from(btx2);
    right.columns_mut(2 * k, r).copy_from(r2);
    let core_left = left.qr().r();
    let core_right = right.qr().r();
    (core_left * core_right.transpose()).norm()
}
