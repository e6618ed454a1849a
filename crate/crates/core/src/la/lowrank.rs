//! Factored low-rank matrices and their SVD-based compression.

use nalgebra::SVD;

use crate::error::{Error, Result};
use crate::la::DenseMatrix;

/// A matrix stored as `left · rightᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankMatrix {
    left: DenseMatrix,
    right: DenseMatrix,
}

impl LowRankMatrix {
    pub fn new(left: DenseMatrix, right: DenseMatrix) -> Result<Self> {
        if left.ncols() != right.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "low-rank factors with {} and {} columns",
                left.ncols(),
                right.ncols()
            )));
        }
        Ok(Self { left, right })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            left: DenseMatrix::zeros(n_rows, 0),
            right: DenseMatrix::zeros(n_cols, 0),
        }
    }

    pub fn left(&self) -> &DenseMatrix {
        &self.left
    }

    pub fn right(&self) -> &DenseMatrix {
        &self.right
    }

    pub fn into_factors(self) -> (DenseMatrix, DenseMatrix) {
        (self.left, self.right)
    }

    /// Number of stored columns (an upper bound for the true rank).
    pub fn rank(&self) -> usize {
        self.left.ncols()
    }

    pub fn n_rows(&self) -> usize {
        self.left.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.right.nrows()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        &self.left * self.right.transpose()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            left: &self.left * alpha,
            right: self.right.clone(),
        }
    }

    /// Frobenius inner product with another factored matrix, never forming either.
    pub fn frobenius_dot(&self, other: &Self) -> f64 {
        assert_eq!(self.n_rows(), other.n_rows());
        assert_eq!(self.n_cols(), other.n_cols());
        if self.rank() == 0 || other.rank() == 0 {
            return 0.0;
        }
        let gl = self.left.transpose() * &other.left;
        let gr = self.right.transpose() * &other.right;
        gl.component_mul(&gr).sum()
    }

    /// Frobenius norm computed from the small QR cores.
    pub fn frobenius_norm(&self) -> f64 {
        if self.rank() == 0 {
            return 0.0;
        }
        let rl = self.left.clone().qr().r();
        let rr = self.right.clone().qr().r();
        (rl * rr.transpose()).norm()
    }

    /// Concatenates factors so that the result represents `Σ αᵢ·Xᵢ`.
    pub fn stack(terms: &[(f64, &LowRankMatrix)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty low-rank sum".into()))?
            .1;
        let (n, m) = (first.n_rows(), first.n_cols());
        let k: usize = terms.iter().map(|(_, t)| t.rank()).sum();
        let mut left = DenseMatrix::zeros(n, k);
        let mut right = DenseMatrix::zeros(m, k);
        let mut offset = 0;
        for &(alpha, t) in terms {
            if t.n_rows() != n || t.n_cols() != m {
                return Err(Error::DimensionMismatch(format!(
                    "adding {}x{} to {}x{}",
                    t.n_rows(),
                    t.n_cols(),
                    n,
                    m
                )));
            }
            let r = t.rank();
            left.columns_mut(offset, r).copy_from(&(&t.left * alpha));
            right.columns_mut(offset, r).copy_from(&t.right);
            offset += r;
        }
        Ok(Self { left, right })
    }
}

/// Result of compressing a factored matrix.
#[derive(Debug, Clone)]
pub struct Truncation {
    /// Compressed factors; the left factor has orthonormal columns.
    pub matrix: LowRankMatrix,
    /// Singular values kept, in decreasing order.
    pub retained: Vec<f64>,
    /// Singular values dropped, in decreasing order.
    pub dropped: Vec<f64>,
}

/// Recompresses `x` by skinny QR of both factors followed by an SVD of the
/// small core, keeping exactly the singular values `≥ tol` (and nonzero).
pub fn truncated_svd(x: &LowRankMatrix, tol: f64) -> LowRankMatrix {
    truncated_svd_values(x, tol).matrix
}

/// Like [`truncated_svd`] but also reports the retained and dropped values.
pub fn truncated_svd_values(x: &LowRankMatrix, tol: f64) -> Truncation {
    truncate_to(x, tol, usize::MAX)
}

/// Keeps singular values `≥ threshold`, capped at `max_rank` terms.
pub fn truncate_to(x: &LowRankMatrix, threshold: f64, max_rank: usize) -> Truncation {
    truncate_with(x, |sv| {
        sv.iter()
            .take_while(|&&s| s >= threshold && s > 0.0)
            .count()
            .min(max_rank)
    })
}

/// Smallest rank (at most `max_rank`) whose discarded tail has Frobenius norm
/// `≤ rel_tol·‖x‖_F`. With `rel_tol = 0` only exact zeros are dropped.
pub fn truncate_frobenius(x: &LowRankMatrix, rel_tol: f64, max_rank: usize) -> Truncation {
    truncate_frobenius_above(x, rel_tol, max_rank, 0.0)
}

/// [`truncate_frobenius`] that also drops every singular value `≤ floor`.
/// Sums of nearly cancelling terms need the floor: their roundoff is not
/// small relative to the sum itself.
pub fn truncate_frobenius_above(
    x: &LowRankMatrix,
    rel_tol: f64,
    max_rank: usize,
    floor: f64,
) -> Truncation {
    truncate_with(x, |sv| {
        let above = sv.iter().take_while(|&&s| s > floor).count();
        tail_rank(sv, rel_tol).min(max_rank).min(above)
    })
}

/// Number of leading values to keep so the squared tail stays within budget.
fn tail_rank(sorted_desc: &[f64], rel_tol: f64) -> usize {
    let total2: f64 = sorted_desc.iter().map(|s| s * s).sum();
    let budget2 = rel_tol * rel_tol * total2;
    let mut tail2 = 0.0;
    let mut keep = sorted_desc.len();
    while keep > 0 {
        let s = sorted_desc[keep - 1];
        if s > 0.0 && tail2 + s * s > budget2 {
            break;
        }
        tail2 += s * s;
        keep -= 1;
    }
    keep
}

fn truncate_with(x: &LowRankMatrix, choose: impl FnOnce(&[f64]) -> usize) -> Truncation {
    let (n, m) = (x.n_rows(), x.n_cols());
    if x.rank() == 0 || n == 0 || m == 0 {
        return Truncation {
            matrix: LowRankMatrix::zeros(n, m),
            retained: vec![],
            dropped: vec![],
        };
    }
    let (q_left, r_left) = x.left.clone().qr().unpack();
    let (q_right, r_right) = x.right.clone().qr().unpack();
    let core = r_left * r_right.transpose();
    let svd = SVD::new(core, true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sorted: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let k = choose(&sorted);

    let mut core_left = DenseMatrix::zeros(u.nrows(), k);
    let mut core_right = DenseMatrix::zeros(v_t.ncols(), k);
    for (j, &i) in order[..k].iter().enumerate() {
        core_left.set_column(j, &u.column(i));
        core_right.set_column(j, &(v_t.row(i).transpose() * svd.singular_values[i]));
    }
    Truncation {
        matrix: LowRankMatrix {
            left: q_left * core_left,
            right: q_right * core_right,
        },
        retained: sorted[..k].to_vec(),
        dropped: sorted[k..].to_vec(),
    }
}

/// Low-rank approximation of a dense matrix with Frobenius error at most
/// `rel_tol·‖a‖_F`, at most `max_rank` terms.
///
/// A column-pivoted Gram–Schmidt pass first reveals the numerical rank
/// (stopping at roundoff level), then an SVD of the small coefficient matrix
/// picks the truncation. Cost is `O(rows·cols·rank)`.
pub fn compress_dense(a: &DenseMatrix, rel_tol: f64, max_rank: usize) -> LowRankMatrix {
    let (n, m) = a.shape();
    let total = a.norm();
    if total == 0.0 || n == 0 || m == 0 {
        return LowRankMatrix::zeros(n, m);
    }
    let floor = 4.0 * f64::EPSILON * total;
    let mut work = a.clone();
    let mut norms2: Vec<f64> = work.column_iter().map(|c| c.norm_squared()).collect();
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::new();
    while basis.len() < n.min(m) {
        if norms2.iter().sum::<f64>().max(0.0).sqrt() <= floor {
            break;
        }
        let jmax = (0..m).fold(0, |best, j| if norms2[j] > norms2[best] { j } else { best });
        let mut q = work.column(jmax).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&q);
                q.axpy(-c, b, 1.0);
            }
        }
        let qn = q.norm();
        if qn <= floor {
            break;
        }
        q /= qn;
        let coeffs = work.tr_mul(&q);
        work.ger(-1.0, &q, &coeffs, 1.0);
        for (j, c) in work.column_iter().enumerate() {
            norms2[j] = c.norm_squared();
        }
        basis.push(q);
    }
    if basis.is_empty() {
        return LowRankMatrix::zeros(n, m);
    }
    let q = DenseMatrix::from_columns(&basis);
    let coeffs = q.tr_mul(a);
    let svd = SVD::new(coeffs, true, true);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let sorted: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    // the tail budget is relative to ‖a‖_F, not to the coefficient norm
    let scaled_tol = rel_tol * total / sorted.iter().map(|s| s * s).sum::<f64>().sqrt();
    let keep = tail_rank(&sorted, scaled_tol).min(max_rank);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let vt = svd.v_t.as_ref().expect("right singular vectors requested");
    let kept = &order[..keep];
    let left = q * u.select_columns(kept);
    let right = DenseMatrix::from_fn(m, keep, |j, k| {
        vt[(kept[k], j)] * svd.singular_values[kept[k]]
    });
    LowRankMatrix { left, right }
}
