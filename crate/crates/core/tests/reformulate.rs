mod common;

use common::{random_matrix, rel_err, rng, Instance};
use nalgebra::{DVector, SymmetricEigen};
use skpik_core::discretize::{
    ProblemConfig, Regularization, RegularizationKind, SpaceOperators, TimeGrid,
};
use skpik_core::la::{DenseMatrix, LowRankMatrix, SparseMatrix};
use skpik_core::reformulate::*;
use skpik_core::Error;

fn unregularized(sigma: f64, beta: f64, shift: f64) -> ProblemConfig {
    ProblemConfig {
        shift: Some(shift),
        regularization: Regularization {
            kind: RegularizationKind::None,
            epsilon: 0.0,
        },
        ..ProblemConfig::new(sigma, beta)
    }
}

fn scalar_ops(m: f64, k: f64) -> SpaceOperators {
    SpaceOperators::new(
        SparseMatrix::from_diagonal(&[m]),
        SparseMatrix::from_diagonal(&[k]),
    )
    .unwrap()
}

#[test]
fn symmetric_part_of_b_is_positive_definite() {
    for m_t in [1, 2, 7, 64] {
        let (sigma, tau) = (0.3, 1.0 / m_t as f64);
        let b = build_b(sigma, tau, 1e-4, m_t).to_dense();
        let sym = (&b + b.transpose()) * 0.5;
        let c = time_difference(m_t).to_dense();
        let sym_c = (&c + c.transpose()) * (0.5 * sigma / tau);
        let mut expected = DenseMatrix::zeros(2 * m_t, 2 * m_t);
        expected.view_mut((0, 0), (m_t, m_t)).copy_from(&sym_c);
        expected.view_mut((m_t, m_t), (m_t, m_t)).copy_from(&sym_c);
        assert!((&sym - expected).amax() < 1e-12);
        assert!(SymmetricEigen::new(sym).eigenvalues.min() > 0.0);
    }
}

#[test]
fn rhs_reconstruction() {
    let mut r = rng(1);
    let (y1, y2) = (random_matrix(&mut r, 12, 3), random_matrix(&mut r, 5, 3));
    let beta = 0.09;
    let (r1, r2) = build_rhs(&y1, &y2, beta).unwrap();
    let full = &r1 * r2.transpose();
    let yd = &y1 * y2.transpose();
    assert!(full.columns(0, 5).amax() == 0.0);
    assert!((full.columns(5, 5) - yd / beta.sqrt()).amax() < 1e-15);
    let (z1, z2) = build_rhs(&DenseMatrix::zeros(12, 0), &DenseMatrix::zeros(5, 0), 1.0).unwrap();
    assert_eq!((z1.ncols(), z2.shape()), (0, (10, 0)));
}

#[test]
fn inverse_composes_to_identity() {
    let v = random_matrix(&mut rng(2), 25, 4);
    let plain = Instance::with_config(4, 2, unregularized(1.0, 1e-2, 1.0), "ex1");
    let regularized = Instance::new(4, 2, 1.0, 1e-2, "ex1");
    for (inst, shift, tol) in [
        (&plain, 1.0, 1e-12),
        (&regularized, 0.7, 1e-12),
        (&regularized, 0.0, 1e-8),
    ] {
        // with s = 0 the accuracy is bounded by cond(K + εM) ~ 1/ε
        let a = SpatialOperator::new(&inst.ops, shift).unwrap();
        assert!(rel_err(&a.apply_inverse(&a.apply(&v)), &v) < tol);
        assert!(rel_err(&a.apply(&a.apply_inverse(&v)), &v) < tol);
    }
}

#[test]
fn singular_shifted_stiffness_asks_for_shift() {
    let inst = Instance::with_config(3, 2, unregularized(1.0, 1.0, 0.0), "ex1");
    let err = SpatialOperator::new(&inst.ops, 0.0).unwrap_err();
    assert!(matches!(err, Error::ShiftedNotSpd { .. }));
    assert!(err.to_string().contains("--shift"));
}

#[test]
fn kkt_scalar_case() {
    let cfg = unregularized(1.0, 1.0, 0.0);
    let grid = TimeGrid::unit(1).unwrap();
    let yd = DenseMatrix::from_element(1, 1, 5.0);
    let kkt = assemble_kkt_dense(&scalar_ops(1.0, 1.0), &cfg, &grid, &yd).unwrap();
    assert_eq!(
        kkt.matrix,
        DenseMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, -1.0])
    );
    assert_eq!(kkt.rhs.as_slice(), &[5.0, 0.0]);
}

#[test]
fn kkt_matrix_is_symmetric_and_guarded() {
    let inst = Instance::new(4, 4, 1.0, 1e-2, "ex1");
    let kkt = assemble_kkt_dense(&inst.ops, &inst.config, &inst.grid, &inst.yd).unwrap();
    assert_eq!(kkt.matrix, kkt.matrix.transpose());
    let big = Instance::new(30, 2, 1.0, 1e-2, "ex1");
    let grid = TimeGrid::unit(2).unwrap();
    let yd = DenseMatrix::zeros(big.ops.n(), 2);
    assert!(matches!(
        assemble_kkt_dense(&big.ops, &big.config, &grid, &yd),
        Err(Error::SizeGuard { .. })
    ));
}

/// Unknown vector of the reduced system from `X = [Y, Λ/√β]`.
fn as_vector(x: &DenseMatrix) -> DVector<f64> {
    DVector::from_column_slice(x.as_slice())
}

#[test]
fn sylvester_solution_solves_reduced_kkt() {
    for (sigma, beta) in [(1.0, 1e-2), (0.0, 1e-8), (1e4, 1.0)] {
        let inst = Instance::new(2, 3, sigma, beta, "ex2");
        let x = solve_sylvester_kronecker(&inst.problem()).unwrap();
        let kkt = assemble_kkt_dense(&inst.ops, &inst.config, &inst.grid, &inst.yd).unwrap();
        let oracle = kkt.solve().unwrap();
        let err = (as_vector(&x) - &oracle).norm() / oracle.norm();
        assert!(err < 1e-10, "sigma {sigma} beta {beta}: {err}");
    }
}

#[test]
fn full_kkt_eliminates_to_reduced() {
    let inst = Instance::new(2, 3, 1.0, 1e-2, "ex1");
    let nm = inst.ops.n() * inst.grid.steps();
    let full = assemble_kkt3_dense(&inst.ops, &inst.config, &inst.grid, &inst.yd)
        .unwrap()
        .solve()
        .unwrap();
    let reduced = assemble_kkt_dense(&inst.ops, &inst.config, &inst.grid, &inst.yd)
        .unwrap()
        .solve()
        .unwrap();
    let beta = inst.config.beta;
    let (y, u, lam) = (full.rows(0, nm), full.rows(nm, nm), full.rows(2 * nm, nm));
    assert!((u - lam / beta).norm() <= 1e-10 * u.norm());
    assert!((y - reduced.rows(0, nm)).norm() <= 1e-10 * y.norm());
    assert!((lam / beta.sqrt() - reduced.rows(nm, nm)).norm() <= 1e-10 * lam.norm() / beta.sqrt());
}

#[test]
fn matrix_equation_and_sylvester_forms_agree() {
    let inst = Instance::new(3, 4, 0.5, 1e-4, "ex2");
    let x = solve_sylvester_kronecker(&inst.problem()).unwrap();
    let (g, rhs) =
        matrix_equation_kronecker(&inst.ops, &inst.config, &inst.grid, &inst.yd).unwrap();
    let res = (&g * as_vector(&x) - &rhs).norm() / rhs.norm();
    assert!(res < 1e-10, "{res}");
}

#[test]
fn kronecker_form_is_nonsingular() {
    let inst = Instance::new(2, 2, 1.0, 1e-2, "ex1");
    let (k, _) = sylvester_kronecker(&inst.problem()).unwrap();
    let sv = k.singular_values();
    assert!(sv.min() > 1e-8 * sv.max());
}

#[test]
fn recovered_state_and_control_satisfy_state_equation() {
    let inst = Instance::new(3, 4, 1.0, 1e-2, "ex1");
    let x = solve_sylvester_kronecker(&inst.problem()).unwrap();
    let lr = LowRankMatrix::new(x, DenseMatrix::identity(8, 8)).unwrap();
    let sol = extract_solution(&lr, inst.config.beta).unwrap();
    let (y, u) = (sol.state.to_dense(), sol.control.to_dense());
    // 𝓝 vec(Y) − τ𝓜 vec(U), applied blockwise in time
    let tau = inst.grid.tau();
    let sigma = inst.config.effective_sigma();
    let (m, k) = (inst.ops.mass.to_dense(), inst.ops.stiffness.to_dense());
    let mut worst: f64 = 0.0;
    for t in 0..4 {
        let mut r = &k * y.column(t) * tau + &m * y.column(t) * sigma - &m * u.column(t) * tau;
        if t > 0 {
            r -= &m * y.column(t - 1) * sigma;
        }
        worst = worst.max(r.norm());
    }
    assert!(worst < 1e-8 * u.norm(), "{worst}");
}

#[test]
fn joint_scaling_of_mass_and_stiffness_leaves_solution_unchanged() {
    let inst = Instance::new(3, 3, 1.0, 1e-2, "ex1");
    let x = solve_sylvester_kronecker(&inst.problem()).unwrap();
    let scaled =
        SpaceOperators::new(inst.ops.mass.scaled(7.0), inst.ops.stiffness.scaled(7.0)).unwrap();
    let p = SylvesterProblem::new(&scaled, &inst.config, &inst.grid, &inst.desired).unwrap();
    assert!(rel_err(&solve_sylvester_kronecker(&p).unwrap(), &x) < 1e-12);
}

#[test]
fn shift_does_not_change_solution() {
    let mut cfg = ProblemConfig::new(1.0, 1e-2);
    let base = Instance::with_config(3, 3, cfg.clone(), "ex2");
    let x0 = solve_sylvester_kronecker(&base.problem()).unwrap();
    cfg.shift = Some(2.5);
    let shifted = Instance::with_config(3, 3, cfg, "ex2");
    assert!(rel_err(&solve_sylvester_kronecker(&shifted.problem()).unwrap(), &x0) < 1e-10);
}

#[test]
fn problem_rejects_bad_desired_shape() {
    let inst = Instance::new(2, 3, 1.0, 1e-2, "ex1");
    let wrong = LowRankMatrix::zeros(inst.ops.n(), 4);
    assert!(SylvesterProblem::new(&inst.ops, &inst.config, &inst.grid, &wrong).is_err());
}
