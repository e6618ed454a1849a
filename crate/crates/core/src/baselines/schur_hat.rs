use crate::discretize::{ProblemConfig, SpaceOperators, TimeGrid};
use crate::error::{Error, Result};
use crate::la::{sparse_spd_factorize, DenseMatrix, SparseFactorization, SparseMatrix};

/// Matching-type approximation `Ŝ = (1/τ) L 𝓜⁻¹ Lᵀ` of the Schur complement,
/// where `L = 𝓝 + (τ/√β)𝓜` is block lower bidiagonal in time with diagonal
/// blocks `D = τK + σM + (τ/√β)M` and subdiagonal blocks `−σM`.
///
/// Vectors are `n × m_T` matrices whose columns are time steps.
#[derive(Debug, Clone)]
pub struct SchurHatApprox {
    mass: SparseMatrix,
    mass_factor: SparseFactorization,
    diagonal: SparseMatrix,
    diagonal_factor: SparseFactorization,
    sigma: f64,
    tau: f64,
}

impl SchurHatApprox {
    pub fn new(ops: &SpaceOperators, config: &ProblemConfig, grid: &TimeGrid) -> Result<Self> {
        let tau = grid.tau();
        let sigma = config.effective_sigma();
        let mass_coeff = sigma + tau / config.beta.sqrt();
        let diagonal =
            SparseMatrix::linear_combination(tau, &ops.stiffness, mass_coeff, &ops.mass)?;
        let diagonal_factor = sparse_spd_factorize(&diagonal).map_err(|e| {
            Error::InvalidConfig(format!(
                "Schur approximation block τK + (σ + τ/√β)M is not positive definite: {e}"
            ))
        })?;
        Ok(Self {
            mass: ops.mass.clone(),
            mass_factor: sparse_spd_factorize(&ops.mass)?,
            diagonal,
            diagonal_factor,
            sigma,
            tau,
        })
    }

    pub fn n(&self) -> usize {
        self.mass.n_rows()
    }

    fn check(&self, v: &DenseMatrix) {
        assert_eq!(
            v.nrows(),
            self.n(),
            "Schur approximation applied to wrong row count"
        );
    }

    fn solve_d(&self, col: &mut [f64]) {
        self.diagonal_factor.solve_in_place(col);
    }

    /// `Ŝ⁻¹ v = τ L⁻ᵀ 𝓜 L⁻¹ v` by forward and backward block substitution.
    pub fn apply_inverse(&self, v: &DenseMatrix) -> DenseMatrix {
        self.check(v);
        let m_t = v.ncols();
        let mut z = v.clone();
        for k in 0..m_t {
            if k > 0 {
                let coupling = self.mass.mul_vec(z.column(k - 1).as_slice());
                for (zi, ci) in z.column_mut(k).iter_mut().zip(&coupling) {
                    *zi += self.sigma * ci;
                }
            }
            self.solve_d(z.column_mut(k).as_mut_slice());
        }
        let mut u = self.mass.mul_dense(&z);
        for k in (0..m_t).rev() {
            if k + 1 < m_t {
                let coupling = self.mass.mul_vec(u.column(k + 1).as_slice());
                for (ui, ci) in u.column_mut(k).iter_mut().zip(&coupling) {
                    *ui += self.sigma * ci;
                }
            }
            self.solve_d(u.column_mut(k).as_mut_slice());
        }
        u * self.tau
    }

    /// `Ŝ v`, used to check the inverse.
    pub fn apply(&self, v: &DenseMatrix) -> DenseMatrix {
        self.check(v);
        let m_t = v.ncols();
        // Lᵀ v: column k is D v_k − σM v_{k+1}
        let mut w = self.diagonal.mul_dense(v);
        let mv = self.mass.mul_dense(v);
        for k in 0..m_t.saturating_sub(1) {
            let next = mv.column(k + 1).into_owned();
            w.column_mut(k).axpy(-self.sigma, &next, 1.0);
        }
        let w = self.mass_factor.solve_dense(&w);
        let mut out = self.diagonal.mul_dense(&w);
        let mw = self.mass.mul_dense(&w);
        for k in 1..m_t {
            let prev = mw.column(k - 1).into_owned();
            out.column_mut(k).axpy(-self.sigma, &prev, 1.0);
        }
        out / self.tau
    }
}

/// One-shot `Ŝ⁻¹ v` for a vector stacked time step by time step.
pub fn apply_schur_hat_inv(
    v: &[f64],
    ops: &SpaceOperators,
    config: &ProblemConfig,
    grid: &TimeGrid,
) -> Result<Vec<f64>> {
    let n = ops.n();
    let m_t = grid.steps();
    if v.len() != n * m_t {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for n·m_T = {}",
            v.len(),
            n * m_t
        )));
    }
    let s = SchurHatApprox::new(ops, config, grid)?;
    let out = s.apply_inverse(&DenseMatrix::from_column_slice(n, m_t, v));
    Ok(out.as_slice().to_vec())
}
