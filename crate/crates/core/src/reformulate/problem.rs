use crate::discretize::{ProblemConfig, SpaceOperators, TimeGrid};
use crate::error::{Error, Result};
use crate::la::{
    sparse_lu_factorize, sparse_spd_factorize, DenseMatrix, LowRankMatrix, SparseFactorization,
    SparseMatrix,
};

use super::rhs::build_rhs;
use super::time::build_b_shifted;

/// Operator access to `A = M⁻¹(K + sM)` and its inverse through sparse
/// Cholesky factors of `M` and `K + sM`. `A` itself is never formed.
#[derive(Debug, Clone)]
pub struct SpatialOperator {
    mass: SparseMatrix,
    stiffness: SparseMatrix,
    mass_factor: SparseFactorization,
    shifted_factor: SparseFactorization,
    shift: f64,
}

impl SpatialOperator {
    pub fn new(ops: &SpaceOperators, shift: f64) -> Result<Self> {
        let mass_factor = sparse_spd_factorize(&ops.mass)?;
        let shifted = if shift == 0.0 {
            ops.stiffness.clone()
        } else {
            SparseMatrix::linear_combination(1.0, &ops.stiffness, shift, &ops.mass)?
        };
        let shifted_factor = sparse_spd_factorize(&shifted).map_err(|e| Error::ShiftedNotSpd {
            shift,
            source: Box::new(e),
        })?;
        Ok(Self {
            mass: ops.mass.clone(),
            stiffness: ops.stiffness.clone(),
            mass_factor,
            shifted_factor,
            shift,
        })
    }

    pub fn n(&self) -> usize {
        self.mass.n_rows()
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `M⁻¹(K x) + s·x`.
    pub fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut y = self.mass_factor.solve_dense(&self.stiffness.mul_dense(x));
        if self.shift != 0.0 {
            y += x * self.shift;
        }
        y
    }

    /// `(K + sM)⁻¹(M x)`.
    pub fn apply_inverse(&self, x: &DenseMatrix) -> DenseMatrix {
        self.shifted_factor.solve_dense(&self.mass.mul_dense(x))
    }

    /// Dense `M⁻¹(K + sM)` for oracle use on small instances.
    pub fn to_dense(&self) -> DenseMatrix {
        self.apply(&DenseMatrix::identity(self.n(), self.n()))
    }
}

/// `(A + sI)·X + X·(B − sI) = R₁R₂ᵀ` with `X = [Y, Λ/√β]`.
#[derive(Debug, Clone)]
pub struct SylvesterProblem {
    a: SpatialOperator,
    b: SparseMatrix,
    b_factor: SparseFactorization,
    r1: DenseMatrix,
    r2: DenseMatrix,
    beta: f64,
}

impl SylvesterProblem {
    /// Builds the problem from spatial operators and a factored desired
    /// state `Y_d ≈ Y₁Y₂ᵀ` (`n × m_T`).
    pub fn new(
        ops: &SpaceOperators,
        config: &ProblemConfig,
        grid: &TimeGrid,
        desired: &LowRankMatrix,
    ) -> Result<Self> {
        config.validate()?;
        let (n, m_t) = (ops.n(), grid.steps());
        if desired.n_rows() != n || desired.n_cols() != m_t {
            return Err(Error::DimensionMismatch(format!(
                "desired state is {}x{}, expected {n}x{m_t}",
                desired.n_rows(),
                desired.n_cols()
            )));
        }
        let shift = config.shift();
        let a = SpatialOperator::new(ops, shift)?;
        let b = build_b_shifted(
            config.effective_sigma(),
            grid.tau(),
            config.beta,
            m_t,
            shift,
        );
        let (r1, r2) = build_rhs(desired.left(), desired.right(), config.beta)?;
        Self::from_parts(a, b, r1, r2, config.beta)
    }

    /// Assembles a problem from an already shifted `B` and explicit RHS factors.
    pub fn from_parts(
        a: SpatialOperator,
        b: SparseMatrix,
        r1: DenseMatrix,
        r2: DenseMatrix,
        beta: f64,
    ) -> Result<Self> {
        if !b.is_square()
            || r1.nrows() != a.n()
            || r2.nrows() != b.n_rows()
            || r1.ncols() != r2.ncols()
        {
            return Err(Error::DimensionMismatch(format!(
                "A is {0}x{0}, B is {1}x{2}, R1 is {3}x{4}, R2 is {5}x{6}",
                a.n(),
                b.n_rows(),
                b.n_cols(),
                r1.nrows(),
                r1.ncols(),
                r2.nrows(),
                r2.ncols()
            )));
        }
        let b_factor = sparse_lu_factorize(&b)?;
        Ok(Self {
            a,
            b,
            b_factor,
            r1,
            r2,
            beta,
        })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// Number of columns of `X` (`2m_T`).
    pub fn n_cols(&self) -> usize {
        self.b.n_rows()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn shift(&self) -> f64 {
        self.a.shift()
    }

    pub fn spatial(&self) -> &SpatialOperator {
        &self.a
    }

    /// The shifted time coupling `B − sI`.
    pub fn b(&self) -> &SparseMatrix {
        &self.b
    }

    pub fn r1(&self) -> &DenseMatrix {
        &self.r1
    }

    pub fn r2(&self) -> &DenseMatrix {
        &self.r2
    }

    pub fn rhs_rank(&self) -> usize {
        self.r1.ncols()
    }

    /// `‖R₁R₂ᵀ‖_F`.
    pub fn rhs_norm(&self) -> f64 {
        LowRankMatrix::new(self.r1.clone(), self.r2.clone())
            .expect("conformal RHS factors")
            .frobenius_norm()
    }

    pub fn apply_a(&self, x: &DenseMatrix) -> DenseMatrix {
        self.a.apply(x)
    }

    pub fn apply_a_inv(&self, x: &DenseMatrix) -> DenseMatrix {
        self.a.apply_inverse(x)
    }

    pub fn apply_b(&self, x: &DenseMatrix) -> DenseMatrix {
        self.b.mul_dense(x)
    }

    pub fn apply_bt(&self, x: &DenseMatrix) -> DenseMatrix {
        self.b.mul_transpose_dense(x)
    }

    pub fn apply_b_inv(&self, x: &DenseMatrix) -> DenseMatrix {
        self.b_factor.solve_dense(x)
    }

    /// `B⁻ᵀ x`.
    pub fn apply_bt_inv(&self, x: &DenseMatrix) -> DenseMatrix {
        self.b_factor.solve_transpose_dense(x)
    }
}
