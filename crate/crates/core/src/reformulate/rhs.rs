use crate::error::{Error, Result};
use crate::la::DenseMatrix;

/// Splits `[0 | Y_d/√β]` into `R₁ = Y₁/√β` and `R₂ = [0; Y₂]`.
pub fn build_rhs(
    y1: &DenseMatrix,
    y2: &DenseMatrix,
    beta: f64,
) -> Result<(DenseMatrix, DenseMatrix)> {
    if y1.ncols() != y2.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "desired-state factors have {} and {} columns",
            y1.ncols(),
            y2.ncols()
        )));
    }
    let (m_t, r) = y2.shape();
    let r1 = y1 / beta.sqrt();
    let mut r2 = DenseMatrix::zeros(2 * m_t, r);
    r2.rows_mut(m_t, m_t).copy_from(y2);
    Ok((r1, r2))
}
