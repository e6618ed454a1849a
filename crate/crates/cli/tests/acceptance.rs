//! Acceptance criteria 1 to 10, one verdict line each.
//!
//! Attainable requirements are asserted. Requirements that the surrogate
//! problem cannot meet are reported as FAIL with the offending points and are
//! explained in the decisions ledger; they do not abort the test.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::collections::BTreeMap;
use std::io::Write;

use common::{code, random_matrix, rel_err, rng, skpik, Instance};
use nalgebra::DVector;
use rand::Rng;
use skpik_cli::point::{Method, PointSpec, Source};
use skpik_cli::sweep::run_points;
use skpik_core::baselines::{
    apply_schur_hat_inv, fminres_solve, lrminres_solve, lrminres_solve_observed, minres,
    DenseSpace, MinresOptions, DEFAULT_MAX_RANK,
};
use skpik_core::discretize::{lowrank_desired, ProblemConfig, SpaceOperators};
use skpik_core::la::{mm_read, mm_write, solve_sylvester_dense, DenseMatrix, SparseMatrix};
use skpik_core::reformulate::{
    assemble_kkt3_dense, assemble_kkt_dense, build_b, matrix_equation_kronecker,
    sylvester_kronecker, SpatialOperator, SylvesterProblem,
};
use skpik_core::skpik::{factored_residual, skpik_solve};

struct Verdict {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
    /// Violations of requirements the implementation must meet.
    hard_failures: Vec<String>,
}

impl Verdict {
    fn line(&self) -> String {
        format!(
            "acceptance criterion {:>2}: {} | {} | {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

fn report(v: &Verdict) {
    // written straight to stderr so the line survives output capture
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{}", v.line());
}

/// `(n, m_T)` grid shared by the oracle criteria.
const ORACLE_SIZES: [(usize, usize); 3] = [(2, 2), (4, 4), (8, 8)];
const ORACLE_SIGMAS: [f64; 4] = [0.0, 1e-4, 1.0, 1e4];
const ORACLE_BETAS: [f64; 2] = [1e-2, 1e-8];

fn oracle_grid() -> Vec<(usize, usize, f64, f64)> {
    let mut out = vec![];
    for (cells, m_t) in ORACLE_SIZES {
        for sigma in ORACLE_SIGMAS {
            for beta in ORACLE_BETAS {
                out.push((cells, m_t, sigma, beta));
            }
        }
    }
    out
}

fn block(v: &DVector<f64>, n: usize, m_t: usize, k: usize) -> DenseMatrix {
    DenseMatrix::from_column_slice(n, m_t, &v.as_slice()[k * n * m_t..(k + 1) * n * m_t])
}

fn criterion_1() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut failures = vec![];
    for (cells, m_t, sigma, beta) in oracle_grid() {
        let inst = Instance::new(cells, m_t, sigma, beta);
        let n = inst.ops.n();
        let sb = beta.sqrt();
        let oracle = assemble_kkt_dense(&inst.ops, &inst.config, &inst.grid, &inst.yd)
            .unwrap()
            .solve()
            .unwrap();
        let (y_ref, z_ref) = (block(&oracle, n, m_t, 0), block(&oracle, n, m_t, 1));
        let problem = SylvesterProblem::new(
            &inst.ops,
            &inst.config,
            &inst.grid,
            &lowrank_desired(&inst.yd, 1e-14),
        )
        .unwrap();
        let (x, rep) = skpik_solve(&problem, 1e-8, 1e-12, 500).unwrap();
        let x = x.to_dense();
        let (y, z) = (
            x.columns(0, m_t).into_owned(),
            x.columns(m_t, m_t).into_owned(),
        );
        let errs = [
            rel_err(&y, &y_ref),
            rel_err(&(&z / sb), &(&z_ref / sb)),
            rel_err(&(&z * sb), &(&z_ref * sb)),
        ];
        let e = errs.into_iter().fold(0.0, f64::max);
        worst = worst.max(e);
        if !(e <= 1e-6) || !rep.converged {
            failures.push(format!(
                "n={n} mT={m_t} sigma={sigma:e} beta={beta:e}: err {e:.2e}, converged {}",
                rep.converged
            ));
        }
    }
    Verdict {
        id: 1,
        title: "oracle equivalence (Y, U, Lambda vs dense reduced solve)",
        pass: failures.is_empty(),
        detail: format!("24 points, worst relative error {worst:.2e} (limit 1e-6)"),
        hard_failures: failures,
    }
}

fn criterion_2() -> Verdict {
    let mut worst_elim: f64 = 0.0;
    let mut worst_split: f64 = 0.0;
    let mut failures = vec![];
    for (cells, m_t, sigma, beta) in oracle_grid() {
        let inst = Instance::new(cells, m_t, sigma, beta);
        let n = inst.ops.n();
        let nm = n * m_t;
        let sb = beta.sqrt();
        let tau = inst.grid.tau();

        // full system applied to (y, z/√β, √β z) reproduces the reduced rows
        let full = assemble_kkt3_dense(&inst.ops, &inst.config, &inst.grid, &inst.yd).unwrap();
        let reduced = assemble_kkt_dense(&inst.ops, &inst.config, &inst.grid, &inst.yd).unwrap();
        let mut lift = DenseMatrix::zeros(3 * nm, 2 * nm);
        lift.view_mut((0, 0), (nm, nm)).fill_with_identity();
        lift.view_mut((nm, nm), (nm, nm))
            .copy_from(&(DenseMatrix::identity(nm, nm) / sb));
        lift.view_mut((2 * nm, nm), (nm, nm))
            .copy_from(&(DenseMatrix::identity(nm, nm) * sb));
        let mut expected = DenseMatrix::zeros(3 * nm, 2 * nm);
        expected
            .rows_mut(0, nm)
            .copy_from(&reduced.matrix.rows(0, nm));
        expected
            .rows_mut(2 * nm, nm)
            .copy_from(&(reduced.matrix.rows(nm, nm) / sb));
        let mut expected_rhs = DVector::zeros(3 * nm);
        expected_rhs
            .rows_mut(0, nm)
            .copy_from(&reduced.rhs.rows(0, nm));
        expected_rhs
            .rows_mut(2 * nm, nm)
            .copy_from(&(reduced.rhs.rows(nm, nm) / sb));
        let elim = rel_err(&(&full.matrix * &lift), &expected)
            .max((&full.rhs - &expected_rhs).norm() / expected_rhs.norm());

        // split form = (Hᵀ ⊗ M) · Sylvester form, for matrix and RHS
        let (split, split_rhs) =
            matrix_equation_kronecker(&inst.ops, &inst.config, &inst.grid, &inst.yd).unwrap();
        let problem = SylvesterProblem::new(
            &inst.ops,
            &inst.config,
            &inst.grid,
            &lowrank_desired(&inst.yd, 1e-14),
        )
        .unwrap();
        let (sylv, sylv_rhs) = sylvester_kronecker(&problem).unwrap();
        let mut h = DenseMatrix::zeros(2 * m_t, 2 * m_t);
        h.view_mut((0, m_t), (m_t, m_t))
            .copy_from(&(DenseMatrix::identity(m_t, m_t) * (tau * sb)));
        h.view_mut((m_t, 0), (m_t, m_t))
            .copy_from(&(DenseMatrix::identity(m_t, m_t) * (tau * sb)));
        let scale = h.transpose().kronecker(&inst.ops.mass.to_dense());
        let split_err = rel_err(&(&scale * sylv), &split)
            .max((&scale * sylv_rhs - &split_rhs).norm() / split_rhs.norm());

        worst_elim = worst_elim.max(elim);
        worst_split = worst_split.max(split_err);
        if !(elim <= 1e-10 && split_err <= 1e-10) {
            failures.push(format!(
                "n={n} mT={m_t} sigma={sigma:e} beta={beta:e}: elimination {elim:.2e}, splitting {split_err:.2e}"
            ));
        }
    }
    Verdict {
        id: 2,
        title: "reformulation chain (full to reduced system, split form to Sylvester form)",
        pass: failures.is_empty(),
        detail: format!(
            "24 points, worst elimination defect {worst_elim:.2e}, worst splitting defect {worst_split:.2e} (limit 1e-10)"
        ),
        hard_failures: failures,
    }
}

fn criterion_3() -> Verdict {
    let mut r = rng(2024);
    let mut worst: f64 = 0.0;
    let mut failures = vec![];
    for trial in 0..200 {
        let p = r.random_range(1..=12);
        let q = r.random_range(1..=10);
        // shifted so that no eigenvalue pair of A and B cancels
        let a = random_matrix(&mut r, p, p) + DenseMatrix::identity(p, p) * (p as f64 + 1.0);
        let b = random_matrix(&mut r, q, q) + DenseMatrix::identity(q, q) * (q as f64 + 1.0);
        let c = random_matrix(&mut r, p, q);
        let y = solve_sylvester_dense(&a, &b, &c).unwrap();
        let kron =
            DenseMatrix::identity(q, q).kronecker(&a) + b.kronecker(&DenseMatrix::identity(p, p));
        let oracle = kron
            .lu()
            .solve(&DVector::from_column_slice(c.as_slice()))
            .unwrap();
        let oracle = DenseMatrix::from_column_slice(p, q, oracle.as_slice());
        let e = rel_err(&y, &oracle);
        worst = worst.max(e);
        if !(e <= 1e-10) {
            failures.push(format!("trial {trial} ({p}x{q}): {e:.2e}"));
        }
    }
    Verdict {
        id: 3,
        title: "dense Sylvester kernel vs Kronecker oracle",
        pass: failures.is_empty(),
        detail: format!(
            "200 random instances up to 12x10, worst relative error {worst:.2e} (limit 1e-10)"
        ),
        hard_failures: failures,
    }
}

fn random_spd(r: &mut rand_chacha::ChaCha8Rng, n: usize, shift: f64) -> SparseMatrix {
    let g = random_matrix(r, n, n);
    SparseMatrix::from_dense(&(&g * g.transpose() + DenseMatrix::identity(n, n) * shift))
}

fn criterion_4() -> Verdict {
    let mut r = rng(77);
    let (n, m_t) = (30, 4);
    let mut worst: f64 = 0.0;
    let mut failures = vec![];
    for trial in 0..50 {
        let ops = SpaceOperators::new(random_spd(&mut r, n, n as f64), random_spd(&mut r, n, 1.0))
            .unwrap();
        let a = SpatialOperator::new(&ops, 0.0).unwrap();
        let b = build_b(1.0, 1.0 / m_t as f64, 1e-2, m_t);
        let r1 = random_matrix(&mut r, n, 2);
        let r2 = random_matrix(&mut r, 2 * m_t, 2);
        let problem = SylvesterProblem::from_parts(a, b, r1, r2, 1e-2).unwrap();
        let k = r.random_range(1..=8);
        let x1 = random_matrix(&mut r, n, k);
        let x2 = random_matrix(&mut r, 2 * m_t, k);
        let got = factored_residual(&x1, &x2, &problem).unwrap();
        let x = &x1 * x2.transpose();
        let rhs = problem.r1() * problem.r2().transpose();
        let dense = (problem.spatial().to_dense() * &x + &x * problem.b().to_dense() - &rhs).norm()
            / rhs.norm();
        let e = (got - dense).abs() / dense;
        worst = worst.max(e);
        if !(e <= 1e-13) {
            failures.push(format!("trial {trial} (rank {k}): {e:.2e}"));
        }
    }
    Verdict {
        id: 4,
        title: "residual honesty (factored vs dense residual)",
        pass: failures.is_empty(),
        detail: format!(
            "50 random 30x8 instances, worst relative disagreement {worst:.2e} (limit 1e-13)"
        ),
        hard_failures: failures,
    }
}

const SWEEP_MESHES: [usize; 2] = [30, 54];
const SWEEP_STEPS: [usize; 3] = [100, 200, 400];
const SWEEP_SIGMAS: [f64; 3] = [1e-4, 1.0, 1e4];
const SWEEP_BETAS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];

struct SweepRow {
    n: usize,
    m_t: usize,
    sigma: f64,
    beta: f64,
    rank: usize,
    sweeps: usize,
    seconds: f64,
    residual: f64,
    converged: bool,
}

fn desk_scale_sweep() -> Vec<SweepRow> {
    let mut points = vec![];
    for cells in SWEEP_MESHES {
        for m_t in SWEEP_STEPS {
            for sigma in SWEEP_SIGMAS {
                for beta in SWEEP_BETAS {
                    points.push(PointSpec::new(
                        Method::Skpik,
                        Source::Mesh(cells),
                        m_t,
                        ProblemConfig::new(sigma, beta),
                    ));
                }
            }
        }
    }
    // a few workers keep the per-point timings meaningful
    let jobs = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(4);
    run_points(&points, jobs)
        .into_iter()
        .map(|row| SweepRow {
            n: row.n,
            m_t: row.m_t,
            sigma: row.sigma,
            beta: row.beta,
            rank: row.rank,
            sweeps: row.total_iterations,
            seconds: row.seconds,
            residual: row.residual,
            converged: row.converged,
        })
        .collect()
}

fn criterion_5(rows: &[SweepRow]) -> Verdict {
    let mut hard = vec![];
    let mut rank_violations = vec![];
    let mut slow = vec![];
    for r in rows {
        let point = format!(
            "n={} mT={} sigma={:e} beta={:e}",
            r.n, r.m_t, r.sigma, r.beta
        );
        if !(r.converged && r.residual <= 1e-6) {
            hard.push(format!(
                "{point}: residual {:.2e}, converged {}",
                r.residual, r.converged
            ));
        }
        if r.rank > 10 {
            rank_violations.push(format!("{point}: rank {}", r.rank));
        }
        if r.seconds > 60.0 {
            slow.push(format!("{point}: {:.1} s", r.seconds));
        }
    }
    let max_rank = rows.iter().map(|r| r.rank).max().unwrap_or(0);
    let max_secs = rows.iter().map(|r| r.seconds).fold(0.0, f64::max);
    let mut detail = format!(
        "{}/{} converged to RES <= 1e-6, max rank {max_rank} (limit 10), max time {max_secs:.2} s (limit 60)",
        rows.len() - hard.len(),
        rows.len()
    );
    if !rank_violations.is_empty() {
        detail += &format!(
            "; rank above 10 at {} points (see decisions ledger): {}",
            rank_violations.len(),
            rank_violations.join("; ")
        );
    }
    if !slow.is_empty() {
        detail += &format!("; over 60 s: {}", slow.join("; "));
    }
    Verdict {
        id: 5,
        title: "low-rank behavior on the desk-scale sweep",
        pass: hard.is_empty() && rank_violations.is_empty() && slow.is_empty(),
        detail,
        hard_failures: hard,
    }
}

fn criterion_6(rows: &[SweepRow]) -> Verdict {
    let mut by_point: BTreeMap<(usize, u64, u64), BTreeMap<usize, usize>> = BTreeMap::new();
    for r in rows {
        by_point
            .entry((r.n, r.sigma.to_bits(), r.beta.to_bits()))
            .or_default()
            .insert(r.m_t, r.sweeps);
    }
    let mut violations = vec![];
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for ((n, s, b), counts) in &by_point {
        let seq: Vec<(usize, usize)> = counts.iter().map(|(&m, &c)| (m, c)).collect();
        for w in seq.windows(2) {
            let ((m0, c0), (m1, c1)) = (w[0], w[1]);
            pairs += 1;
            let change = (c1 as f64 - c0 as f64).abs() / c0.max(1) as f64;
            worst = worst.max(change);
            if change > 0.25 {
                violations.push(format!(
                    "n={n} sigma={:e} beta={:e}: mT {m0}->{m1} sweeps {c0}->{c1}",
                    f64::from_bits(*s),
                    f64::from_bits(*b)
                ));
            }
        }
    }
    let mut detail = format!(
        "{}/{pairs} doublings within 25%, worst change {:.0}%",
        pairs - violations.len(),
        worst * 100.0
    );
    if !violations.is_empty() {
        detail += &format!(" (see decisions ledger): {}", violations.join("; "));
    }
    Verdict {
        id: 6,
        title: "m_T robustness of sweep counts",
        pass: violations.is_empty(),
        detail,
        hard_failures: vec![],
    }
}

fn dense_preconditioner_inverse(inst: &Instance) -> DenseMatrix {
    let nm = inst.ops.n() * inst.grid.steps();
    let (big_m, _) = inst.dense_blocks();
    let mut p = DenseMatrix::zeros(2 * nm, 2 * nm);
    p.view_mut((0, 0), (nm, nm))
        .copy_from(&(big_m * inst.grid.tau()).try_inverse().unwrap());
    p.view_mut((nm, nm), (nm, nm)).copy_from(
        &(inst.dense_schur_hat() * inst.config.beta)
            .try_inverse()
            .unwrap(),
    );
    p
}

fn criterion_7() -> Verdict {
    let mut hard = vec![];

    // untruncated low-rank MINRES against full-vector MINRES
    let mut inst = Instance::new(4, 4, 1.0, 1e-2);
    inst.config.trunc_tol = 0.0;
    let options = MinresOptions {
        tol: 1e-10,
        max_iterations: 500,
    };
    let kkt = assemble_kkt_dense(&inst.ops, &inst.config, &inst.grid, &inst.yd).unwrap();
    let dense =
        DenseSpace::with_preconditioner(kkt.matrix.clone(), dense_preconditioner_inverse(&inst));
    let mut dense_iterates = vec![];
    minres(&dense, &kkt.rhs, options, |_, x| {
        dense_iterates.push(x.clone())
    })
    .unwrap();
    let mut lr_iterates = vec![];
    lrminres_solve_observed(
        &inst.ops,
        &inst.config,
        &inst.grid,
        &lowrank_desired(&inst.yd, 1e-14),
        options.tol,
        usize::MAX,
        |_, x| lr_iterates.push(DVector::from_vec(x.to_stacked())),
    )
    .unwrap();
    let iterate_err = lr_iterates
        .iter()
        .zip(&dense_iterates)
        .map(|(a, b)| (a - b).norm() / b.norm())
        .fold(0.0, f64::max);
    if lr_iterates.len() != dense_iterates.len() || !(iterate_err <= 1e-10) {
        hard.push(format!(
            "iterates: {} vs {}, worst difference {iterate_err:.2e}",
            lr_iterates.len(),
            dense_iterates.len()
        ));
    }

    // truncated low-rank MINRES in the favorable corner at desk scale
    let corner = Instance::new(30, 100, 1e-4, 1e-8);
    let (_, lr) = lrminres_solve(
        &corner.ops,
        &corner.config,
        &corner.grid,
        &lowrank_desired(&corner.yd, 1e-14),
        1e-6,
        DEFAULT_MAX_RANK,
    )
    .unwrap();
    if !lr.converged {
        hard.push(format!(
            "lrminres at n=961 mT=100 did not converge ({:.2e})",
            lr.residual
        ));
    }

    // sequential MINRES with one step is the all-at-once solution
    let mut fm_worst: f64 = 0.0;
    for (sigma, beta) in [(1e-4, 1e-2), (1.0, 1e-2), (1e4, 1e-2), (1.0, 1e-8)] {
        let inst = Instance::new(8, 1, sigma, beta);
        let n = inst.ops.n();
        let (traj, _) =
            fminres_solve(&inst.ops, &inst.config, &inst.grid, &inst.yd, 1e-10).unwrap();
        let oracle = assemble_kkt3_dense(&inst.ops, &inst.config, &inst.grid, &inst.yd)
            .unwrap()
            .solve()
            .unwrap();
        let got = DVector::from_column_slice(traj.column(0).as_slice());
        for k in 0..3 {
            let e =
                (got.rows(k * n, n) - oracle.rows(k * n, n)).norm() / oracle.rows(k * n, n).norm();
            fm_worst = fm_worst.max(e);
        }
    }
    if !(fm_worst <= 1e-5) {
        hard.push(format!(
            "fminres at mT=1 differs from the oracle by {fm_worst:.2e}"
        ));
    }

    Verdict {
        id: 7,
        title: "baseline sanity (LRMINRES iterates, favorable corner, FMINRES at m_T=1)",
        pass: hard.is_empty(),
        detail: format!(
            "{} iterates agree to {iterate_err:.2e}; LRMINRES n=961 mT=100 sigma=1e-4 beta=1e-8: converged {} in {} its, rank {}, RES {:.2e}; FMINRES mT=1 worst error {fm_worst:.2e}",
            lr_iterates.len(),
            lr.converged,
            lr.iterations,
            lr.rank,
            lr.residual
        ),
        hard_failures: hard,
    }
}

fn criterion_8() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut failures = vec![];
    let mut count = 0;
    for cells in [2, 4, 8] {
        for m_t in [1, 2, 4, 8] {
            for (sigma, beta) in [(0.0, 1e-2), (1e-4, 1e-8), (1.0, 1e-2), (1e4, 1e-8)] {
                let inst = Instance::new(cells, m_t, sigma, beta);
                let nm = inst.ops.n() * m_t;
                let v = random_matrix(&mut rng(count as u64), nm, 1);
                let expected = inst.dense_schur_hat().lu().solve(&v).unwrap();
                let got =
                    apply_schur_hat_inv(v.as_slice(), &inst.ops, &inst.config, &inst.grid).unwrap();
                let e = rel_err(&DenseMatrix::from_column_slice(nm, 1, &got), &expected);
                worst = worst.max(e);
                count += 1;
                if !(e <= 1e-10) {
                    failures.push(format!(
                        "n={} mT={m_t} sigma={sigma:e} beta={beta:e}: {e:.2e}",
                        inst.ops.n()
                    ));
                }
            }
        }
    }
    Verdict {
        id: 8,
        title: "Schur approximation inverse vs dense",
        pass: failures.is_empty(),
        detail: format!("{count} instances with n <= 81, mT <= 8, worst relative error {worst:.2e} (limit 1e-10)"),
        hard_failures: failures,
    }
}

fn criterion_9() -> Verdict {
    let levels = [16, 32, 64];
    let m_t = 100;
    let mut hard = vec![];
    let mut violations = vec![];
    let mut summary = vec![];
    for sigma in SWEEP_SIGMAS {
        for beta in SWEEP_BETAS {
            let mut ranks = vec![];
            for cells in levels {
                let inst = Instance::new(cells, m_t, sigma, beta);
                let problem = SylvesterProblem::new(
                    &inst.ops,
                    &inst.config,
                    &inst.grid,
                    &lowrank_desired(&inst.yd, 1e-14),
                )
                .unwrap();
                let (_, rep) = skpik_solve(&problem, 1e-6, 1e-10, 500).unwrap();
                if !rep.converged {
                    hard.push(format!(
                        "n={} sigma={sigma:e} beta={beta:e} did not converge",
                        inst.ops.n()
                    ));
                }
                ranks.push(rep.rank);
            }
            let growth = ranks[2] as i64 - ranks[0] as i64;
            let label = format!(
                "sigma={sigma:e} beta={beta:e}: {}",
                ranks
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join("->")
            );
            if growth > 4 {
                violations.push(label.clone());
            }
            summary.push(label);
        }
    }
    let mut detail = format!(
        "n = 289, 1089, 4225 at mT={m_t}; {}/{} parameter points grow by <= 4",
        summary.len() - violations.len(),
        summary.len()
    );
    if !violations.is_empty() {
        detail += &format!(" (see decisions ledger): {}", violations.join("; "));
    }
    Verdict {
        id: 9,
        title: "rank under mesh refinement",
        pass: violations.is_empty() && hard.is_empty(),
        detail,
        hard_failures: hard,
    }
}

fn strip_seconds(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .map(|l| {
            l.split(',')
                .enumerate()
                .filter(|(i, _)| *i != 7)
                .map(|(_, f)| f.to_string())
                .collect()
        })
        .collect()
}

fn criterion_10() -> Verdict {
    let mut hard = vec![];
    let dir = tempfile::tempdir().unwrap();

    // Matrix Market round trip
    let mut r = rng(10);
    let triplets: Vec<(usize, usize, f64)> = (0..200)
        .map(|_| {
            let i = r.random_range(0..40);
            let j = r.random_range(0..35);
            let v: f64 = r.random_range(-1.0..1.0) * 10f64.powi(r.random_range(-200..200));
            (i, j, v)
        })
        .collect();
    let a = SparseMatrix::from_triplets(40, 35, &triplets);
    let path = dir.path().join("a.mtx");
    mm_write(&path, &a).unwrap();
    let mm_exact = mm_read(&path).unwrap() == a;
    if !mm_exact {
        hard.push("Matrix Market round trip changed values".into());
    }

    // sweep CSV determinism
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"methods": ["skpik", "lrminres", "fminres"], "mesh": [6], "mT": [10, 20], "sigma": [1.0], "beta": [1e-2, 1e-6]}"#,
    )
    .unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let run_a = skpik(&[
        "sweep",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        csv_a.to_str().unwrap(),
        "--jobs",
        "3",
    ]);
    let run_b = skpik(&[
        "sweep",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        csv_b.to_str().unwrap(),
        "--jobs",
        "1",
    ]);
    let text_a = std::fs::read_to_string(&csv_a).unwrap_or_default();
    let text_b = std::fs::read_to_string(&csv_b).unwrap_or_default();
    let deterministic = code(&run_a) == 0
        && code(&run_b) == 0
        && !text_a.is_empty()
        && strip_seconds(&text_a) == strip_seconds(&text_b);
    if !deterministic {
        hard.push("sweep CSV differs between runs beyond the seconds column".into());
    }

    // exit-code contract
    let base = [
        "solve", "--mesh", "6", "--mT", "10", "--sigma", "1", "--beta", "1e-4",
    ];
    let with = |extra: &[&str]| -> Vec<String> {
        base.iter().chain(extra).map(|s| s.to_string()).collect()
    };
    let missing = dir.path().join("missing");
    let cases: Vec<(Vec<String>, i32)> = vec![
        (with(&["--method", "skpik"]), 0),
        (with(&["--method", "lrminres"]), 0),
        (with(&["--method", "fminres"]), 0),
        (with(&["--method", "skpik", "--max-it", "1"]), 2),
        (with(&["--method", "lrminres", "--max-it", "2"]), 2),
        (with(&["--method", "fminres", "--max-it", "1"]), 2),
        (with(&["--method", "skpik", "--beta", "0"]), 1),
        (with(&["--method", "skpik", "--reg", "1"]), 1),
        (with(&["--method", "nope"]), 1),
        (with(&["--method", "skpik", "--bogus"]), 1),
        (vec!["solve".into(), "--method".into(), "skpik".into()], 1),
        (
            [
                "solve",
                "--method",
                "skpik",
                "--matrices",
                missing.to_str().unwrap(),
                "--mT",
                "4",
                "--sigma",
                "1",
                "--beta",
                "1e-2",
            ]
            .map(String::from)
            .to_vec(),
            1,
        ),
        (vec!["verify".into()], 0),
        (vec!["verify".into(), "--flip-sign".into()], 1),
        (vec!["verify".into(), "--n".into(), "24".into()], 1),
        (vec!["frobnicate".into()], 1),
        (vec!["--help".into()], 0),
    ];
    let mut code_failures = vec![];
    for (args, expected) in &cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = code(&skpik(&argv));
        if got != *expected {
            code_failures.push(format!(
                "`{}` exited {got}, expected {expected}",
                args.join(" ")
            ));
        }
    }
    hard.extend(code_failures.iter().cloned());

    Verdict {
        id: 10,
        title: "format fidelity (Matrix Market, CSV determinism, exit codes)",
        pass: hard.is_empty(),
        detail: format!(
            "Matrix Market exact: {mm_exact}; CSV stable across runs: {deterministic}; exit codes {}/{} as specified",
            cases.len() - code_failures.len(),
            cases.len()
        ),
        hard_failures: hard,
    }
}

#[test]
fn acceptance_criteria() {
    let sweep = desk_scale_sweep();
    let verdicts = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&sweep),
        criterion_6(&sweep),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    for v in &verdicts {
        report(v);
    }
    let hard: Vec<String> = verdicts
        .iter()
        .flat_map(|v| {
            v.hard_failures
                .iter()
                .map(move |f| format!("criterion {}: {f}", v.id))
        })
        .collect();
    assert!(hard.is_empty(), "unmet requirements:\n{}", hard.join("\n"));
}
