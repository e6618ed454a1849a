#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skpik_core::discretize::{
    build_mesh, lowrank_desired, sample_desired_state, DesiredState, ProblemConfig, SpaceOperators,
    TimeGrid,
};
use skpik_core::la::{DenseMatrix, LowRankMatrix};
use skpik_core::reformulate::SylvesterProblem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn rel_err(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Everything needed to set up and cross-check a small instance.
pub struct Instance {
    pub ops: SpaceOperators,
    pub config: ProblemConfig,
    pub grid: TimeGrid,
    pub yd: DenseMatrix,
    pub desired: LowRankMatrix,
}

impl Instance {
    pub fn new(cells: usize, m_t: usize, sigma: f64, beta: f64, example: &str) -> Self {
        Self::with_config(cells, m_t, ProblemConfig::new(sigma, beta), example)
    }

    pub fn with_config(cells: usize, m_t: usize, config: ProblemConfig, example: &str) -> Self {
        let mesh = build_mesh(cells);
        let grid = TimeGrid::unit(m_t).unwrap();
        let ops = SpaceOperators::from_mesh(&mesh, &config).unwrap();
        let example: DesiredState = example.parse().unwrap();
        let yd = sample_desired_state(&example, &mesh, &grid).unwrap();
        let desired = lowrank_desired(&yd, 1e-14);
        Self {
            ops,
            config,
            grid,
            yd,
            desired,
        }
    }

    pub fn problem(&self) -> SylvesterProblem {
        SylvesterProblem::new(&self.ops, &self.config, &self.grid, &self.desired).unwrap()
    }
}
