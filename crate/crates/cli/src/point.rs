//! One solver run: problem description, setup and execution.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use skpik_core::baselines::{fminres_solve, lrminres_solve, DEFAULT_MAX_RANK};
use skpik_core::discretize::{
    build_mesh, lowrank_desired, read_table, sample_desired_state, DesiredState, Mesh2D,
    ProblemConfig, SpaceOperators, TimeGrid,
};
use skpik_core::la::{compress_dense, DenseMatrix, LowRankMatrix};
use skpik_core::reformulate::SylvesterProblem;
use skpik_core::skpik::{skpik_solve, SolveReport};
use skpik_core::Error;

use crate::error::{io_err, CliError, CliResult};
use crate::output::ResultRow;

/// Relative accuracy used to factor the desired state.
pub const DESIRED_COMPRESSION: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Skpik,
    Lrminres,
    Fminres,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Skpik => "skpik",
            Method::Lrminres => "lrminres",
            Method::Fminres => "fminres",
        })
    }
}

/// Where the spatial matrices come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Built-in unit-square mesh with this many cells per side.
    Mesh(usize),
    /// Directory with `M.mtx`, `K.mtx` and optionally `mesh.json`.
    Matrices(PathBuf),
}

/// Everything that defines a single run.
#[derive(Debug, Clone)]
pub struct PointSpec {
    pub method: Method,
    pub source: Source,
    pub steps: usize,
    pub final_time: f64,
    pub config: ProblemConfig,
    pub desired: DesiredState,
    pub max_rank: usize,
}

impl PointSpec {
    pub fn new(method: Method, source: Source, steps: usize, config: ProblemConfig) -> Self {
        Self {
            method,
            source,
            steps,
            final_time: 1.0,
            config,
            desired: DesiredState::Ex1,
            max_rank: DEFAULT_MAX_RANK,
        }
    }
}

/// Assembled operators and data for a point.
pub struct Setup {
    pub ops: SpaceOperators,
    pub grid: TimeGrid,
    pub yd: DenseMatrix,
}

/// Sidecar written next to generated matrices.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MeshInfo {
    pub schema_version: u32,
    pub n: usize,
    pub h: f64,
    pub cells_per_side: usize,
}

pub fn read_mesh_info(dir: &Path) -> CliResult<Option<MeshInfo>> {
    let path = dir.join("mesh.json");
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|source| CliError::Json { path, source })
}

fn desired_on(
    desired: &DesiredState,
    mesh: Option<&Mesh2D>,
    n: usize,
    grid: &TimeGrid,
) -> CliResult<DenseMatrix> {
    match (desired, mesh) {
        (DesiredState::File(path), _) => Ok(read_table(path, n, grid.steps())?),
        (_, Some(mesh)) => Ok(sample_desired_state(desired, mesh, grid)?),
        (_, None) => Err(CliError::Usage(
            "analytic desired states need node coordinates; the matrix directory has no mesh.json, \
             so use --example file --yd-file PATH"
                .into(),
        )),
    }
}

impl Setup {
    pub fn build(spec: &PointSpec) -> CliResult<Self> {
        spec.config.validate()?;
        let grid = TimeGrid::new(spec.steps, spec.final_time)?;
        let (ops, mesh) = match &spec.source {
            Source::Mesh(cells) => {
                if *cells == 0 {
                    return Err(CliError::Usage("--mesh must be at least 1".into()));
                }
                let mesh = build_mesh(*cells);
                (SpaceOperators::from_mesh(&mesh, &spec.config)?, Some(mesh))
            }
            Source::Matrices(dir) => {
                let ops = SpaceOperators::import(dir, &spec.config)?;
                let mesh = match read_mesh_info(dir)? {
                    Some(info) if info.n == ops.n() => Some(build_mesh(info.cells_per_side)),
                    Some(info) => {
                        return Err(CliError::Usage(format!(
                            "mesh.json declares n = {} but the matrices have n = {}",
                            info.n,
                            ops.n()
                        )))
                    }
                    None => None,
                };
                (ops, mesh)
            }
        };
        let yd = desired_on(&spec.desired, mesh.as_ref(), ops.n(), &grid)?;
        Ok(Self { ops, grid, yd })
    }
}

/// Result of a run together with the factors of `X = [Y, Λ/√β]`.
pub struct PointOutcome {
    pub row: ResultRow,
    /// `(X₁, X₂)` with `X = X₁X₂ᵀ`; absent when the run aborted.
    pub factors: Option<(DenseMatrix, DenseMatrix)>,
}

fn joint_factors(state: &LowRankMatrix, multiplier: &LowRankMatrix) -> (DenseMatrix, DenseMatrix) {
    let (n, m_t) = (state.n_rows(), state.n_cols());
    let (ks, km) = (state.rank(), multiplier.rank());
    let mut left = DenseMatrix::zeros(n, ks + km);
    left.columns_mut(0, ks).copy_from(state.left());
    left.columns_mut(ks, km).copy_from(multiplier.left());
    let mut right = DenseMatrix::zeros(2 * m_t, ks + km);
    right.view_mut((0, 0), (m_t, ks)).copy_from(state.right());
    right
        .view_mut((m_t, ks), (m_t, km))
        .copy_from(multiplier.right());
    (left, right)
}

/// Runs `spec`. Solver non-convergence (including an aborted sequential
/// step) yields a row with `converged = false`; setup problems are errors.
pub fn run_point(spec: &PointSpec) -> CliResult<PointOutcome> {
    let setup = Setup::build(spec)?;
    for w in spec.config.warnings() {
        eprintln!("warning: {w}");
    }
    run_setup(spec, &setup)
}

pub fn run_setup(spec: &PointSpec, setup: &Setup) -> CliResult<PointOutcome> {
    let start = Instant::now();
    let Setup { ops, grid, yd } = setup;
    let config = &spec.config;
    let (report, factors) = match spec.method {
        Method::Skpik => {
            let desired = lowrank_desired(yd, DESIRED_COMPRESSION);
            let problem = SylvesterProblem::new(ops, config, grid, &desired)?;
            let (x, report) = skpik_solve(
                &problem,
                config.tol,
                config.trunc_tol,
                config.max_iterations,
            )?;
            let (x1, x2) = x.into_factors();
            (report, Some((x1, x2)))
        }
        Method::Lrminres => {
            let desired = lowrank_desired(yd, DESIRED_COMPRESSION);
            let (x, report) =
                lrminres_solve(ops, config, grid, &desired, config.tol, spec.max_rank)?;
            (report, Some(joint_factors(&x.state, &x.multiplier)))
        }
        Method::Fminres => match fminres_solve(ops, config, grid, yd, config.tol) {
            Ok((trajectory, report)) => {
                let n = ops.n();
                let m_t = grid.steps();
                let mut x = DenseMatrix::zeros(n, 2 * m_t);
                x.columns_mut(0, m_t).copy_from(&trajectory.rows(0, n));
                x.columns_mut(m_t, m_t)
                    .copy_from(&(trajectory.rows(2 * n, n) / config.beta.sqrt()));
                let (x1, x2) = compress_dense(&x, 0.0, usize::MAX).into_factors();
                (report, Some((x1, x2)))
            }
            Err(Error::StepNotConverged { step, residual }) => {
                eprintln!("fminres: time step {step} did not converge (residual {residual:e})");
                let report = SolveReport {
                    rank: 0,
                    iterations: 0,
                    residual,
                    seconds: start.elapsed().as_secs_f64(),
                    history: vec![],
                    subspace_dims: (0, 0),
                    converged: false,
                    absolute_residual: false,
                    stagnated: false,
                    step_iterations: vec![],
                };
                (report, None)
            }
            Err(e) => return Err(e.into()),
        },
    };
    let row = ResultRow::from_report(spec.method, ops.n(), grid.steps(), config, &report);
    Ok(PointOutcome { row, factors })
}
