use nalgebra::DVector;

use crate::discretize::{ProblemConfig, SpaceOperators, TimeGrid};
use crate::error::{Error, Result};
use crate::la::{DenseMatrix, LowRankMatrix};

use super::problem::SylvesterProblem;
use super::time::time_difference;

/// Largest dense oracle matrix (entries) that may be assembled.
pub const DENSE_ENTRY_LIMIT: usize = 4_000_000;

/// Which dense optimality system was assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KktForm {
    /// Unknowns `(vec Y, vec Λ/√β)`; symmetric.
    Reduced,
    /// Unknowns `(vec Y, vec U, vec Λ)`.
    Full,
}

/// Dense saddle-point system with its right-hand side.
#[derive(Debug, Clone)]
pub struct KktSystem {
    pub form: KktForm,
    pub matrix: DenseMatrix,
    pub rhs: DVector<f64>,
    pub n: usize,
    pub m_t: usize,
}

impl KktSystem {
    pub fn solve(&self) -> Result<DVector<f64>> {
        self.matrix
            .clone()
            .lu()
            .solve(&self.rhs)
            .ok_or(Error::Singular { column: 0 })
    }

    /// `‖b − K·x‖ / ‖b‖`.
    pub fn relative_residual(&self, x: &DVector<f64>) -> f64 {
        (&self.rhs - &self.matrix * x).norm() / self.rhs.norm()
    }
}

fn guard(dim: usize) -> Result<()> {
    let entries = dim.saturating_mul(dim);
    if entries > DENSE_ENTRY_LIMIT {
        return Err(Error::SizeGuard {
            entries,
            limit: DENSE_ENTRY_LIMIT,
        });
    }
    Ok(())
}

fn check_desired(yd: &DenseMatrix, n: usize, m_t: usize) -> Result<()> {
    if yd.shape() != (n, m_t) {
        return Err(Error::DimensionMismatch(format!(
            "desired state is {}x{}, expected {n}x{m_t}",
            yd.nrows(),
            yd.ncols()
        )));
    }
    Ok(())
}

/// Dense `𝓜 = I⊗M` and `𝓝 = I⊗τK + C⊗σM`.
fn time_space_blocks(
    ops: &SpaceOperators,
    config: &ProblemConfig,
    grid: &TimeGrid,
) -> (DenseMatrix, DenseMatrix) {
    let m_t = grid.steps();
    let mass = ops.mass.to_dense();
    let stiffness = ops.stiffness.to_dense();
    let eye = DenseMatrix::identity(m_t, m_t);
    let c = time_difference(m_t).to_dense();
    let big_m = eye.kronecker(&mass);
    let big_n =
        eye.kronecker(&(stiffness * grid.tau())) + c.kronecker(&(mass * config.effective_sigma()));
    (big_m, big_n)
}

fn vec_of(x: &DenseMatrix) -> DVector<f64> {
    DVector::from_column_slice(x.as_slice())
}

/// `[[τ𝓜, √β𝓝ᵀ], [√β𝓝, −τ𝓜]]` with RHS `[τ𝓜 vec Y_d; 0]`. Shift-free.
pub fn assemble_kkt_dense(
    ops: &SpaceOperators,
    config: &ProblemConfig,
    grid: &TimeGrid,
    yd: &DenseMatrix,
) -> Result<KktSystem> {
    let (n, m_t) = (ops.n(), grid.steps());
    let nm = n * m_t;
    guard(2 * nm)?;
    check_desired(yd, n, m_t)?;
    let (big_m, big_n) = time_space_blocks(ops, config, grid);
    let tau = grid.tau();
    let sb = config.beta.sqrt();
    let mut matrix = DenseMatrix::zeros(2 * nm, 2 * nm);
    matrix.view_mut((0, 0), (nm, nm)).copy_from(&(&big_m * tau));
    matrix
        .view_mut((0, nm), (nm, nm))
        .copy_from(&(big_n.transpose() * sb));
    matrix.view_mut((nm, 0), (nm, nm)).copy_from(&(&big_n * sb));
    matrix
        .view_mut((nm, nm), (nm, nm))
        .copy_from(&(&big_m * -tau));
    let mut rhs = DVector::zeros(2 * nm);
    rhs.rows_mut(0, nm).copy_from(&(&big_m * vec_of(yd) * tau));
    Ok(KktSystem {
        form: KktForm::Reduced,
        matrix,
        rhs,
        n,
        m_t,
    })
}

/// `[[τ𝓜, 0, 𝓝ᵀ], [0, τβ𝓜, −τ𝓜], [𝓝, −τ𝓜, 0]]` with RHS `[τ𝓜 vec Y_d; 0; 0]`.
pub fn assemble_kkt3_dense(
    ops: &SpaceOperators,
    config: &ProblemConfig,
    grid: &TimeGrid,
    yd: &DenseMatrix,
) -> Result<KktSystem> {
    let (n, m_t) = (ops.n(), grid.steps());
    let nm = n * m_t;
    guard(3 * nm)?;
    check_desired(yd, n, m_t)?;
    let (big_m, big_n) = time_space_blocks(ops, config, grid);
    let tau = grid.tau();
    let mut matrix = DenseMatrix::zeros(3 * nm, 3 * nm);
    matrix.view_mut((0, 0), (nm, nm)).copy_from(&(&big_m * tau));
    matrix
        .view_mut((0, 2 * nm), (nm, nm))
        .copy_from(&big_n.transpose());
    matrix
        .view_mut((nm, nm), (nm, nm))
        .copy_from(&(&big_m * (tau * config.beta)));
    matrix
        .view_mut((nm, 2 * nm), (nm, nm))
        .copy_from(&(&big_m * -tau));
    matrix.view_mut((2 * nm, 0), (nm, nm)).copy_from(&big_n);
    matrix
        .view_mut((2 * nm, nm), (nm, nm))
        .copy_from(&(&big_m * -tau));
    let mut rhs = DVector::zeros(3 * nm);
    rhs.rows_mut(0, nm).copy_from(&(&big_m * vec_of(yd) * tau));
    Ok(KktSystem {
        form: KktForm::Full,
        matrix,
        rhs,
        n,
        m_t,
    })
}

/// Kronecker form `(G⊗M + H⊗K) vec X = vec [τ M Y_d, 0]` of the split
/// matrix equation `M X G + K X H = [τ M Y_d, 0]`, where
/// `G = [[τI, σ√βCᵀ], [σ√βC, −τI]]` and `H = [[0, τ√βI], [τ√βI, 0]]`.
pub fn matrix_equation_kronecker(
    ops: &SpaceOperators,
    config: &ProblemConfig,
    grid: &TimeGrid,
    yd: &DenseMatrix,
) -> Result<(DenseMatrix, DVector<f64>)> {
    let (n, m_t) = (ops.n(), grid.steps());
    guard(2 * n * m_t)?;
    check_desired(yd, n, m_t)?;
    let tau = grid.tau();
    let sb = config.beta.sqrt();
    let c = time_difference(m_t).to_dense();
    let eye = DenseMatrix::identity(m_t, m_t);
    let mut g = DenseMatrix::zeros(2 * m_t, 2 * m_t);
    g.view_mut((0, 0), (m_t, m_t)).copy_from(&(&eye * tau));
    g.view_mut((0, m_t), (m_t, m_t))
        .copy_from(&(c.transpose() * (config.effective_sigma() * sb)));
    g.view_mut((m_t, 0), (m_t, m_t))
        .copy_from(&(&c * (config.effective_sigma() * sb)));
    g.view_mut((m_t, m_t), (m_t, m_t)).copy_from(&(&eye * -tau));
    let mut h = DenseMatrix::zeros(2 * m_t, 2 * m_t);
    h.view_mut((0, m_t), (m_t, m_t))
        .copy_from(&(&eye * (tau * sb)));
    h.view_mut((m_t, 0), (m_t, m_t))
        .copy_from(&(&eye * (tau * sb)));
    let mass = ops.mass.to_dense();
    let matrix = g.kronecker(&mass) + h.kronecker(&ops.stiffness.to_dense());
    let mut rhs_mat = DenseMatrix::zeros(n, 2 * m_t);
    rhs_mat.columns_mut(0, m_t).copy_from(&(mass * yd * tau));
    Ok((matrix, vec_of(&rhs_mat)))
}

/// Kronecker form `(I⊗A + Bᵀ⊗I) vec X = vec(R₁R₂ᵀ)` of a Sylvester problem,
/// with the problem's shifted `A` and `B`.
pub fn sylvester_kronecker(problem: &SylvesterProblem) -> Result<(DenseMatrix, DVector<f64>)> {
    let (n, q) = (problem.n(), problem.n_cols());
    guard(n * q)?;
    let a = problem.spatial().to_dense();
    let b = problem.b().to_dense();
    let matrix = DenseMatrix::identity(q, q).kronecker(&a)
        + b.transpose().kronecker(&DenseMatrix::identity(n, n));
    let rhs = problem.r1() * problem.r2().transpose();
    Ok((matrix, vec_of(&rhs)))
}

/// Dense solution `X` (`n × 2m_T`) of a small Sylvester problem.
pub fn solve_sylvester_kronecker(problem: &SylvesterProblem) -> Result<DenseMatrix> {
    let (matrix, rhs) = sylvester_kronecker(problem)?;
    let x = matrix
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular { column: 0 })?;
    Ok(DenseMatrix::from_column_slice(
        problem.n(),
        problem.n_cols(),
        x.as_slice(),
    ))
}

/// Stacks a low-rank `X = [Y, Λ/√β]` into the reduced KKT unknown vector.
pub fn kkt_vector(x: &LowRankMatrix) -> DVector<f64> {
    vec_of(&x.to_dense())
}
