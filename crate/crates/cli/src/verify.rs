//! Cross-checks of the factored solvers against dense oracles.

use serde::Serialize;
use skpik_core::baselines::lrminres_solve;
use skpik_core::discretize::{
    build_mesh, lowrank_desired, sample_desired_state, DesiredState, ProblemConfig, Regularization,
    RegularizationKind, SpaceOperators, TimeGrid,
};
use skpik_core::la::{DenseMatrix, SparseMatrix};
use skpik_core::reformulate::{
    assemble_kkt3_dense, assemble_kkt_dense, matrix_equation_kronecker, solve_sylvester_kronecker,
    SylvesterProblem,
};
use skpik_core::skpik::skpik_solve;
use skpik_core::Error;

use crate::error::{CliError, CliResult};
use crate::output::SCHEMA_VERSION;
use crate::point::DESIRED_COMPRESSION;

/// Largest error any check may show.
pub const VERIFY_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub n: usize,
    pub m_t: usize,
    pub sigma: f64,
    pub beta: f64,
    pub with_lrminres: bool,
    /// Negates the multiplier block of the factored solution before comparing
    /// (negative control for the harness itself).
    pub flip_sign: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n: 25,
            m_t: 4,
            sigma: 1.0,
            beta: 1e-2,
            with_lrminres: false,
            flip_sign: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub n: usize,
    #[serde(rename = "mT")]
    pub m_t: usize,
    pub sigma: f64,
    pub beta: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn rel(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

fn column_block(v: &[f64], n: usize, m_t: usize, block: usize) -> DenseMatrix {
    DenseMatrix::from_column_slice(n, m_t, &v[block * n * m_t..(block + 1) * n * m_t])
}

/// The instance: mesh-based for `n = (c+1)²`, scalar `M = 1, K = 2` for `n = 1`.
fn instance(
    opts: &VerifyOptions,
) -> CliResult<(SpaceOperators, ProblemConfig, TimeGrid, DenseMatrix)> {
    let grid = TimeGrid::unit(opts.m_t)?;
    let mut config = ProblemConfig::new(opts.sigma, opts.beta);
    if opts.n == 1 {
        config.regularization = Regularization {
            kind: RegularizationKind::None,
            epsilon: 0.0,
        };
        config.validate()?;
        let ops = SpaceOperators::new(
            SparseMatrix::from_diagonal(&[1.0]),
            SparseMatrix::from_diagonal(&[2.0]),
        )?;
        return Ok((
            ops,
            config,
            grid,
            DenseMatrix::from_element(1, opts.m_t, 1.0),
        ));
    }
    let side = (opts.n as f64).sqrt().round() as usize;
    if side < 2 || side * side != opts.n {
        return Err(CliError::Usage(format!(
            "--n must be 1 or a square (c+1)^2 with c >= 1, got {}",
            opts.n
        )));
    }
    config.validate()?;
    let mesh = build_mesh(side - 1);
    let ops = SpaceOperators::from_mesh(&mesh, &config)?;
    let yd = sample_desired_state(&DesiredState::Ex1, &mesh, &grid)?;
    Ok((ops, config, grid, yd))
}

pub fn run_verify(opts: &VerifyOptions) -> CliResult<VerifyReport> {
    let (ops, mut config, grid, yd) = instance(opts)?;
    let (n, m_t) = (ops.n(), grid.steps());
    let sb = config.beta.sqrt();
    let mut checks = Vec::new();
    let mut push = |name: &str, value: f64, threshold: f64| {
        checks.push(Check {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        });
    };

    let kkt = assemble_kkt_dense(&ops, &config, &grid, &yd)?;
    let oracle = kkt.solve()?;
    let y_ref = column_block(oracle.as_slice(), n, m_t, 0);
    let z_ref = column_block(oracle.as_slice(), n, m_t, 1);
    push("oracle_residual", kkt.relative_residual(&oracle), 1e-10);

    config.tol = 1e-10;
    config.trunc_tol = 1e-12;
    let problem = SylvesterProblem::new(
        &ops,
        &config,
        &grid,
        &lowrank_desired(&yd, DESIRED_COMPRESSION),
    )?;
    let (x, report) = skpik_solve(
        &problem,
        config.tol,
        config.trunc_tol,
        config.max_iterations,
    )?;
    let (x1, mut x2) = x.into_factors();
    if opts.flip_sign {
        x2.rows_mut(m_t, m_t).neg_mut();
    }
    let x_dense = &x1 * x2.transpose();
    let y = x_dense.columns(0, m_t).into_owned();
    let z = x_dense.columns(m_t, m_t).into_owned();
    push("skpik_residual", report.residual, VERIFY_THRESHOLD);
    push("state_error", rel(&y, &y_ref), VERIFY_THRESHOLD);
    push(
        "control_error",
        rel(&(&z / sb), &(&z_ref / sb)),
        VERIFY_THRESHOLD,
    );
    push(
        "adjoint_error",
        rel(&(&z * sb), &(&z_ref * sb)),
        VERIFY_THRESHOLD,
    );

    // eliminating U from the full system gives the reduced one
    let kkt3 = assemble_kkt3_dense(&ops, &config, &grid, &yd)?;
    let full = kkt3.solve()?;
    let elimination = [
        rel(&column_block(full.as_slice(), n, m_t, 0), &y_ref),
        rel(&column_block(full.as_slice(), n, m_t, 1), &(&z_ref / sb)),
        rel(&column_block(full.as_slice(), n, m_t, 2), &(&z_ref * sb)),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    push("elimination_consistency", elimination, VERIFY_THRESHOLD);

    // split matrix equation and shifted Sylvester form have the same solution
    let (split, split_rhs) = matrix_equation_kronecker(&ops, &config, &grid, &yd)?;
    let x_split = split
        .lu()
        .solve(&split_rhs)
        .ok_or(Error::Singular { column: 0 })?;
    let x_split = DenseMatrix::from_column_slice(n, 2 * m_t, x_split.as_slice());
    let x_sylv = solve_sylvester_kronecker(&problem)?;
    push(
        "splitting_equivalence",
        rel(&x_split, &x_sylv),
        VERIFY_THRESHOLD,
    );
    let mut x_ref = DenseMatrix::zeros(n, 2 * m_t);
    x_ref.columns_mut(0, m_t).copy_from(&y_ref);
    x_ref.columns_mut(m_t, m_t).copy_from(&z_ref);
    push(
        "sylvester_vs_oracle",
        rel(&x_sylv, &x_ref),
        VERIFY_THRESHOLD,
    );

    if n == 1 && m_t == 1 {
        // 2x2 system [[τ, b], [b, −τ]] with b = √β(τK + σM)
        let tau = grid.tau();
        let b = sb * (2.0 * tau + config.effective_sigma());
        let d = tau * tau + b * b;
        let exact = DenseMatrix::from_row_slice(
            1,
            2,
            &[tau * tau * yd[(0, 0)] / d, tau * b * yd[(0, 0)] / d],
        );
        push("closed_form", rel(&x_dense, &exact), 1e-12);
    }

    if opts.with_lrminres {
        let mut lr_config = config.clone();
        lr_config.trunc_tol = 1e-14;
        let desired = lowrank_desired(&yd, DESIRED_COMPRESSION);
        let (v, report) = lrminres_solve(&ops, &lr_config, &grid, &desired, 1e-10, usize::MAX)?;
        push("lrminres_residual", report.residual, VERIFY_THRESHOLD);
        push(
            "lrminres_state_error",
            rel(&v.state.to_dense(), &y_ref),
            VERIFY_THRESHOLD,
        );
        push(
            "lrminres_multiplier_error",
            rel(&v.multiplier.to_dense(), &z_ref),
            VERIFY_THRESHOLD,
        );
    }

    let passed = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        n,
        m_t,
        sigma: opts.sigma,
        beta: opts.beta,
        checks,
        passed,
    })
}
