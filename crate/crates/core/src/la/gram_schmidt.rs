//! Block modified Gram–Schmidt with re-orthogonalization and deflation.

use crate::la::DenseMatrix;

/// A column is dropped when its norm after projection falls below this
/// fraction of its norm before projection.
pub const DEFLATION_TOL: f64 = 1e-12;

/// Orthonormalizes the columns of `block`, optionally against the orthonormal
/// columns of `against`.
///
/// Every column is projected twice (modified Gram–Schmidt both times) against
/// `against` and the columns already accepted. Columns whose remaining norm is
/// below [`DEFLATION_TOL`] times their original norm are dropped, so the result
/// may have fewer columns than `block`, possibly none.
pub fn mgs_orthonormalize(block: &DenseMatrix, against: Option<&DenseMatrix>) -> DenseMatrix {
    let n = block.nrows();
    if let Some(q) = against {
        assert_eq!(q.nrows(), n, "basis and block row counts differ");
    }
    let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(block.ncols());

    for col in block.column_iter() {
        let mut v: Vec<f64> = col.iter().copied().collect();
        let original = norm(&v);
        if original == 0.0 || !original.is_finite() {
            continue;
        }
        for _ in 0..2 {
            if let Some(q) = against {
                for qc in q.column_iter() {
                    project_out(&mut v, qc.as_slice());
                }
            }
            for qc in &accepted {
                project_out(&mut v, qc);
            }
        }
        let remaining = norm(&v);
        if remaining < DEFLATION_TOL * original {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= remaining);
        accepted.push(v);
    }

    let mut out = DenseMatrix::zeros(n, accepted.len());
    for (j, v) in accepted.iter().enumerate() {
        out.column_mut(j).copy_from_slice(v);
    }
    out
}

fn project_out(v: &mut [f64], q: &[f64]) {
    let c: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
    v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_unchanged() {
        let q = mgs_orthonormalize(&DenseMatrix::identity(2, 2), None);
        assert_eq!(q, DenseMatrix::identity(2, 2));
    }

    #[test]
    fn hand_gram_schmidt() {
        let b = DenseMatrix::from_column_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        let q = mgs_orthonormalize(&b, None);
        assert_eq!(q, DenseMatrix::identity(2, 2));
    }

    #[test]
    fn dependent_columns_deflate() {
        let b =
            DenseMatrix::from_column_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 0.0]);
        let q = mgs_orthonormalize(&b, None);
        assert_eq!(q.ncols(), 2);
        let all = mgs_orthonormalize(&b.columns(0, 1).into_owned(), Some(&q));
        assert_eq!(all.ncols(), 0);
    }

    #[test]
    fn zero_block_gives_empty_basis() {
        let q = mgs_orthonormalize(&DenseMatrix::zeros(4, 2), None);
        assert_eq!(q.shape(), (4, 0));
    }
}
