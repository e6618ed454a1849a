use crate::la::SparseMatrix;

/// Lower-bidiagonal backward-difference matrix: 1 on the diagonal, −1 below.
pub fn time_difference(m_t: usize) -> SparseMatrix {
    let mut t = Vec::with_capacity(2 * m_t);
    for k in 0..m_t {
        t.push((k, k, 1.0));
        if k > 0 {
            t.push((k, k - 1, -1.0));
        }
    }
    SparseMatrix::from_triplets(m_t, m_t, &t)
}

/// The `2m_T × 2m_T` time coupling
/// `[[(σ/τ)Cᵀ, I/√β], [−I/√β, (σ/τ)C]]`.
pub fn build_b(sigma: f64, tau: f64, beta: f64, m_t: usize) -> SparseMatrix {
    build_b_shifted(sigma, tau, beta, m_t, 0.0)
}

/// `build_b(..) − s·I`, assembled in one pass so the diagonal is exact.
pub fn build_b_shifted(sigma: f64, tau: f64, beta: f64, m_t: usize, shift: f64) -> SparseMatrix {
    let a = sigma / tau;
    let c = 1.0 / beta.sqrt();
    let mut t = Vec::with_capacity(8 * m_t);
    for k in 0..m_t {
        let (top, bottom) = (k, m_t + k);
        t.push((top, top, a - shift));
        t.push((bottom, bottom, a - shift));
        if k + 1 < m_t {
            // Cᵀ has −1 above the diagonal
            t.push((top, top + 1, -a));
        }
        if k > 0 {
            t.push((bottom, bottom - 1, -a));
        }
        t.push((top, bottom, c));
        t.push((bottom, top, -c));
    }
    SparseMatrix::from_triplets(2 * m_t, 2 * m_t, &t)
}
