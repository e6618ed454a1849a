use nalgebra::DVector;

use crate::la::DenseMatrix;

use super::minres::MinresSpace;

/// Plain vectors with an explicit operator and an explicit inverse preconditioner.
#[derive(Debug, Clone)]
pub struct DenseSpace {
    pub operator: DenseMatrix,
    pub preconditioner_inverse: DenseMatrix,
}

impl DenseSpace {
    /// Unpreconditioned space.
    pub fn new(operator: DenseMatrix) -> Self {
        let n = operator.nrows();
        Self {
            operator,
            preconditioner_inverse: DenseMatrix::identity(n, n),
        }
    }

    pub fn with_preconditioner(operator: DenseMatrix, preconditioner_inverse: DenseMatrix) -> Self {
        Self {
            operator,
            preconditioner_inverse,
        }
    }
}

impl MinresSpace for DenseSpace {
    type Vector = DVector<f64>;

    fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.operator * v
    }

    fn precondition(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.preconditioner_inverse * v
    }

    fn dot(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(b)
    }

    fn combine(&self, terms: &[(f64, &DVector<f64>)]) -> DVector<f64> {
        let mut out = DVector::zeros(terms.first().map_or(0, |t| t.1.len()));
        for &(alpha, v) in terms {
            out.axpy(alpha, v, 1.0);
        }
        out
    }

    fn zero_like(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::zeros(v.len())
    }
}
