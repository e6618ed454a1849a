#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skpik_core::discretize::{
    build_mesh, sample_desired_state, DesiredState, ProblemConfig, SpaceOperators, TimeGrid,
};
use skpik_core::la::DenseMatrix;
use skpik_core::reformulate::time_difference;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn rel_err(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

pub fn skpik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skpik"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn skpik_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skpik"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Mesh-based instance with the ex1 desired state.
pub struct Instance {
    pub ops: SpaceOperators,
    pub config: ProblemConfig,
    pub grid: TimeGrid,
    pub yd: DenseMatrix,
}

impl Instance {
    pub fn new(cells: usize, m_t: usize, sigma: f64, beta: f64) -> Self {
        let config = ProblemConfig::new(sigma, beta);
        let mesh = build_mesh(cells);
        let grid = TimeGrid::unit(m_t).unwrap();
        let ops = SpaceOperators::from_mesh(&mesh, &config).unwrap();
        let yd = sample_desired_state(&DesiredState::Ex1, &mesh, &grid).unwrap();
        Self {
            ops,
            config,
            grid,
            yd,
        }
    }

    /// Dense `𝓜 = I⊗M` and `𝓝 = I⊗τK + C⊗σM`.
    pub fn dense_blocks(&self) -> (DenseMatrix, DenseMatrix) {
        let m_t = self.grid.steps();
        let eye = DenseMatrix::identity(m_t, m_t);
        let mass = self.ops.mass.to_dense();
        let big_m = eye.kronecker(&mass);
        let big_n = eye.kronecker(&(self.ops.stiffness.to_dense() * self.grid.tau()))
            + time_difference(m_t)
                .to_dense()
                .kronecker(&(mass * self.config.effective_sigma()));
        (big_m, big_n)
    }

    /// Dense `(1/τ)(𝓝 + (τ/√β)𝓜) 𝓜⁻¹ (𝓝 + (τ/√β)𝓜)ᵀ`.
    pub fn dense_schur_hat(&self) -> DenseMatrix {
        let tau = self.grid.tau();
        let (big_m, big_n) = self.dense_blocks();
        let l = &big_n + &big_m * (tau / self.config.beta.sqrt());
        let m_inv = big_m.try_inverse().unwrap();
        &l * m_inv * l.transpose() / tau
    }
}
