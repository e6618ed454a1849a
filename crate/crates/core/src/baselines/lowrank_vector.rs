use crate::error::{Error, Result};
use crate::la::{truncate_frobenius_above, DenseMatrix, LowRankMatrix};

/// Iterate of the reduced optimality system in factored form.
///
/// Both blocks are `n × m_T`; `multiplier` holds the adjoint scaled by `1/√β`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankVector {
    pub state: LowRankMatrix,
    pub multiplier: LowRankMatrix,
}

impl LowRankVector {
    pub fn new(state: LowRankMatrix, multiplier: LowRankMatrix) -> Result<Self> {
        if (state.n_rows(), state.n_cols()) != (multiplier.n_rows(), multiplier.n_cols()) {
            return Err(Error::DimensionMismatch(format!(
                "state block is {}x{} but multiplier block is {}x{}",
                state.n_rows(),
                state.n_cols(),
                multiplier.n_rows(),
                multiplier.n_cols()
            )));
        }
        Ok(Self { state, multiplier })
    }

    pub fn zeros(n: usize, m_t: usize) -> Self {
        Self {
            state: LowRankMatrix::zeros(n, m_t),
            multiplier: LowRankMatrix::zeros(n, m_t),
        }
    }

    pub fn n(&self) -> usize {
        self.state.n_rows()
    }

    pub fn m_t(&self) -> usize {
        self.state.n_cols()
    }

    /// Larger of the two block ranks.
    pub fn max_rank(&self) -> usize {
        self.state.rank().max(self.multiplier.rank())
    }

    /// Euclidean inner product of the stacked vectors.
    pub fn dot(&self, other: &Self) -> f64 {
        self.state.frobenius_dot(&other.state) + self.multiplier.frobenius_dot(&other.multiplier)
    }

    pub fn norm(&self) -> f64 {
        self.state
            .frobenius_norm()
            .hypot(self.multiplier.frobenius_norm())
    }

    /// `[vec Y; vec Z]`.
    pub fn to_stacked(&self) -> Vec<f64> {
        let mut out = self.state.to_dense().as_slice().to_vec();
        out.extend_from_slice(self.multiplier.to_dense().as_slice());
        out
    }

    /// Inverse of [`LowRankVector::to_stacked`], compressing each block exactly.
    pub fn from_stacked(v: &[f64], n: usize, m_t: usize) -> Result<Self> {
        let nm = n * m_t;
        if v.len() != 2 * nm {
            return Err(Error::DimensionMismatch(format!(
                "stacked vector of length {} for 2·n·m_T = {}",
                v.len(),
                2 * nm
            )));
        }
        let block = |s: &[f64]| {
            crate::la::compress_dense(&DenseMatrix::from_column_slice(n, m_t, s), 0.0, usize::MAX)
        };
        Ok(Self {
            state: block(&v[..nm]),
            multiplier: block(&v[nm..]),
        })
    }

    /// `Σ αᵢ·xᵢ` without compression.
    pub fn stack(terms: &[(f64, &LowRankVector)]) -> Result<Self> {
        let states: Vec<_> = terms.iter().map(|&(a, x)| (a, &x.state)).collect();
        let multipliers: Vec<_> = terms.iter().map(|&(a, x)| (a, &x.multiplier)).collect();
        Self::new(
            LowRankMatrix::stack(&states)?,
            LowRankMatrix::stack(&multipliers)?,
        )
    }

    /// Compresses each block to relative Frobenius accuracy `trunc_tol` with
    /// at most `k_max` terms, dropping singular values `≤ floor`.
    pub fn truncated(&self, trunc_tol: f64, k_max: usize, floor: f64) -> Self {
        Self {
            state: truncate_frobenius_above(&self.state, trunc_tol, k_max, floor).matrix,
            multiplier: truncate_frobenius_above(&self.multiplier, trunc_tol, k_max, floor).matrix,
        }
    }

    /// `Σ αᵢ·xᵢ` compressed; singular values at the roundoff level of the
    /// terms are discarded so exact cancellation yields rank 0.
    pub fn combine(terms: &[(f64, &LowRankVector)], trunc_tol: f64, k_max: usize) -> Result<Self> {
        let scale: f64 = terms.iter().map(|&(a, x)| a.abs() * x.norm()).sum();
        let floor = ROUNDOFF_FACTOR * f64::EPSILON * scale;
        Ok(Self::stack(terms)?.truncated(trunc_tol, k_max, floor))
    }
}

/// Multiple of machine epsilon (times the term norms) treated as noise.
const ROUNDOFF_FACTOR: f64 = 16.0;

/// `x + α·y`, recompressed block by block.
pub fn lowrank_axpy_truncate(
    x: &LowRankVector,
    y: &LowRankVector,
    alpha: f64,
    trunc_tol: f64,
    k_max: usize,
) -> Result<LowRankVector> {
    LowRankVector::combine(&[(1.0, x), (alpha, y)], trunc_tol, k_max)
}
