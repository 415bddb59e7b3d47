//! Acceptance suite: end-to-end reproduction of the four built-in benchmark
//! systems plus the randomized property checks, each at its pinned
//! tolerance. One test per criterion; each prints a pass line on success.

mod common;

use lpv_realize::analysis::{
    check_reachability, check_reconstructability, frozen_kalman_decomposition,
    frozen_reachability_conditions, observability_matrix, pbh_matrix, reachability_matrix,
    transformed_observability, ReachabilityStatus, ToleranceConfig,
};
use lpv_realize::builtin::{
    self, builtin, mech1_transform, mech1_unobservable_direction, mech4_minimal_reference,
    ExampleId, MECH4_ROOT_SET,
};
use lpv_realize::model::{CoefficientSide, SchedulingTrajectory};
use lpv_realize::numerics::{
    column_space_basis, matrix_poly_roots, numerical_rank, numerical_rank_complex, subspace_equal,
    TolerancePolicy,
};
use lpv_realize::realization::{build_direct, StructureKind};
use lpv_realize::simulate::{
    estimate_initial_state, response_decomposition, simulate_io, simulate_lti, simulate_ss,
    simulate_steps, transform_along_trajectory,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn traj_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64, len: usize) -> SchedulingTrajectory {
    SchedulingTrajectory::new((0..len).map(|_| vec![rng.gen_range(lo..hi)]).collect()).unwrap()
}

#[test]
fn criterion_1_mechanism_1_reproduction() {
    let tol = ToleranceConfig::default();
    let case = builtin(ExampleId::Mech1);
    let r = build_direct(&case.model).unwrap();

    // frozen conditions fail at p = 1 with the shared root -1 detected
    let at_one = frozen_reachability_conditions(&r, &[1.0], &tol).unwrap();
    assert!(!at_one.passed, "conditions must fail at p = 1");
    assert!(
        at_one.coprimeness_failures.iter().any(|cf| {
            (Complex64::new(cf.sigma[0], cf.sigma[1]) + Complex64::new(1.0, 0.0)).norm() < 1e-8
        }),
        "shared root -1 must be detected to 1e-8, got {:?}",
        at_one.coprimeness_failures
    );
    // ... and pass at p = 2, giving the structural witness
    let verdict = check_reachability(&r, &[vec![1.0], vec![2.0]], &tol).unwrap();
    assert_eq!(verdict.structurally_reachable, ReachabilityStatus::Yes);
    assert_eq!(verdict.witness_p, Some(vec![2.0]));

    // rank O_4 = rank Obar_4 = 2 and the kernel is [0, b_1(p_0), a_2(p_0)]
    let mut g = rng(11);
    for _ in 0..10 {
        let traj = traj_in(&mut g, 1.0, 5.0, 4);
        let o = observability_matrix(&r, &traj).unwrap();
        let red = transformed_observability(&r, &traj).unwrap();
        let rank_o = numerical_rank(&o, TolerancePolicy::default()).unwrap().rank;
        let reduced = numerical_rank(&red.obar_k, TolerancePolicy::default()).unwrap();
        assert_eq!(rank_o, 2);
        assert_eq!(reduced.rank, 2);
        let expect = mech1_unobservable_direction(traj.point(0)[0]);
        let cmp = subspace_equal(
            &reduced.kernel_basis,
            &DMatrix::from_column_slice(3, 1, expect.as_slice()),
            1e-8,
        )
        .unwrap();
        assert!(
            cmp.equal,
            "kernel must match the predicted direction, angles {:?}",
            cmp.principal_angles
        );
    }

    // reconstructible in two steps
    let mut g = rng(12);
    let trials: Vec<_> = (0..10).map(|_| traj_in(&mut g, 1.0, 5.0, 2)).collect();
    let rec = check_reconstructability(&r, &trials, &tol).unwrap();
    assert!(rec.reconstructible);
    assert_eq!(rec.steps, 2);
    assert!(rec.max_residual < 1e-10, "residual {}", rec.max_residual);

    // the orthogonal-basis transform preserves the output over 100 steps
    let mut g = rng(13);
    let n = 100;
    let p = traj_in(&mut g, 1.0, 2.0, n + 1);
    let u = common::random_signal(&mut g, 1, n);
    let original = simulate_ss(&r, &DVector::zeros(3), &u, &p.truncated(n).unwrap()).unwrap();
    let steps = transform_along_trajectory(&r, mech1_transform, &p).unwrap();
    let transformed = simulate_steps(&steps, &DVector::zeros(3), &u).unwrap();
    let scale = 1.0 + original.outputs.amax();
    for k in 0..n {
        let dev = (original.outputs.sample(k) - transformed.sample(k)).amax();
        assert!(dev < 1e-9 * scale, "step {k}: deviation {dev:.3e}");
    }

    println!("criterion 1 (mechanism 1 reproduction): PASS");
}

#[test]
fn criterion_2_mechanism_2_reproduction() {
    let tol = ToleranceConfig::default();
    let case = builtin(ExampleId::Mech2);
    let r = build_direct(&case.model).unwrap();

    // rank B_0 = 1 < n_y: the inverse-FIR condition is not satisfied
    let b0 = r.feedthrough(&[0.0]).unwrap();
    assert_eq!(numerical_rank(&b0, TolerancePolicy::default()).unwrap().rank, 1);
    let verdict = check_reachability(&r, &[vec![0.0]], &tol).unwrap();
    assert_ne!(verdict.structurally_reachable, ReachabilityStatus::Yes);

    // rank R_k = 1 for k = 1..8
    for k in 1..=8 {
        let traj = SchedulingTrajectory::constant(&[0.0], k).unwrap();
        let rm = reachability_matrix(&r, &traj).unwrap();
        assert_eq!(
            numerical_rank(&rm, TolerancePolicy::default()).unwrap().rank,
            1,
            "k = {k}"
        );
    }

    // unreachable subspace span {[1, -3]}
    let kd = frozen_kalman_decomposition(&r, &[0.0], &tol).unwrap();
    let cmp = subspace_equal(
        &kd.unreachable_basis,
        &DMatrix::from_column_slice(2, 1, &[1.0, -3.0]),
        1e-8,
    )
    .unwrap();
    assert!(cmp.equal, "angles {:?}", cmp.principal_angles);

    // frozen minimal order 1
    assert_eq!(kd.minimal_order, 1);

    println!("criterion 2 (mechanism 2 reproduction): PASS");
}

#[test]
fn criterion_3_mechanism_3_reproduction() {
    let tol = ToleranceConfig::default();
    let case = builtin(ExampleId::Mech3);
    let r = build_direct(&case.model).unwrap();

    // not established at all 101 grid points of [-5, 5]
    let grid: Vec<Vec<f64>> = (0..101).map(|i| vec![-5.0 + 0.1 * i as f64]).collect();
    let verdict = check_reachability(&r, &grid, &tol).unwrap();
    assert_eq!(
        verdict.structurally_reachable,
        ReachabilityStatus::NotEstablished
    );
    assert_eq!(verdict.grid_records.len(), 101);
    assert!(verdict.grid_records.iter().all(|g| !g.passed));

    // rank R_3 = 1 with image span {[1, 1]}
    let mut g = rng(31);
    for _ in 0..5 {
        let traj = traj_in(&mut g, -5.0, 5.0, 3);
        let rm = reachability_matrix(&r, &traj).unwrap();
        assert_eq!(numerical_rank(&rm, TolerancePolicy::default()).unwrap().rank, 1);
        let image = column_space_basis(&rm, TolerancePolicy::default()).unwrap();
        let cmp = subspace_equal(
            &image,
            &DMatrix::from_column_slice(2, 1, &[1.0, 1.0]),
            1e-8,
        )
        .unwrap();
        assert!(cmp.equal);
    }

    // rank O_k = 1 with kernel span {[1, 1]} for k = 3..6, constant and random
    let expect = DMatrix::from_column_slice(2, 1, &[1.0, 1.0]);
    let mut g = rng(32);
    for k in 3..=6 {
        let mut trajs = vec![SchedulingTrajectory::constant(&[1.0], k).unwrap()];
        for _ in 0..10 {
            let pts = (0..k)
                .map(|_| {
                    let mag = g.gen_range(0.5..5.0);
                    vec![if g.gen_bool(0.5) { mag } else { -mag }]
                })
                .collect();
            trajs.push(SchedulingTrajectory::new(pts).unwrap());
        }
        for traj in &trajs {
            let o = observability_matrix(&r, traj).unwrap();
            let rr = numerical_rank(&o, TolerancePolicy::default()).unwrap();
            assert_eq!(rr.rank, 1, "k = {k}");
            assert!(subspace_equal(&rr.kernel_basis, &expect, 1e-8).unwrap().equal);
        }
    }

    // from rest the model cancels to y = u exactly
    let mut g = rng(33);
    let n = 50;
    let p = traj_in(&mut g, -5.0, 5.0, n);
    let u = common::random_signal(&mut g, 1, n);
    let (init_y, init_u) = common::zero_windows(&case.model);
    let y = simulate_io(&case.model, &u, &p, &init_y, &init_u).unwrap();
    for k in 0..n {
        let dev = (y.sample(k) - u.sample(k)).amax();
        assert!(dev < 1e-12, "step {k}: |y - u| = {dev:.3e}");
    }

    println!("criterion 3 (mechanism 3 reproduction): PASS");
}

#[test]
fn criterion_4_mechanism_4_reproduction() {
    let tol = ToleranceConfig::default();
    let case = builtin(ExampleId::Mech4);
    let r = build_direct(&case.model).unwrap();

    // companion roots match the printed quadruple within 1e-3 per component
    let rec = frozen_reachability_conditions(&r, &[0.0], &tol).unwrap();
    assert_eq!(rec.roots_tested.len(), 4);
    for target in MECH4_ROOT_SET {
        let best = rec
            .roots_tested
            .iter()
            .map(|s| (s[0] - target.re).abs().max((s[1] - target.im).abs()))
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-3, "root {target}: componentwise distance {best:.3e}");
    }

    // the coprimeness matrix drops to rank 1 at the small real root
    let drop = rec
        .coprimeness_failures
        .iter()
        .find(|cf| (cf.sigma[0] - 0.09066).abs() < 1e-3 && cf.sigma[1].abs() < 1e-3)
        .expect("rank drop at sigma = 0.09066");
    assert_eq!(drop.rank, 1);
    assert!(!rec.passed);

    // the PBH pencil loses exactly one rank at that root
    let sigma = Complex64::new(drop.sigma[0], drop.sigma[1]);
    let pbh = pbh_matrix(&r, &[0.0], sigma).unwrap();
    let pbh_rank = numerical_rank_complex(&pbh, TolerancePolicy::Relative(1e-3))
        .unwrap()
        .rank;
    assert_eq!(pbh_rank, 7, "PBH rank at the shared root");

    // rank O_8 = 4
    let traj = SchedulingTrajectory::constant(&[0.0], 8).unwrap();
    let o = observability_matrix(&r, &traj).unwrap();
    assert_eq!(numerical_rank(&o, TolerancePolicy::default()).unwrap().rank, 4);

    // frozen Kalman dimensions: minimal 3 = 8 - 4 unobservable - 1 unreachable
    let kd = frozen_kalman_decomposition(&r, &[0.0], &tol).unwrap();
    assert_eq!(kd.minimal_order, 3);
    assert_eq!(kd.observable_dim, 4);
    assert_eq!(kd.reachable_dim, 7);
    assert_eq!(kd.unobservable_basis.ncols(), 4);
    assert_eq!(kd.unreachable_basis.ncols(), 1);

    // the adopted plus sign wins the simulation comparison decisively
    let ((plus, minus), _) = builtin::mech4_sign_comparison(50).unwrap();
    assert!(
        plus < minus,
        "plus-sign error {plus:.3e} must beat minus-sign error {minus:.3e}"
    );

    println!("criterion 4 (mechanism 4 reproduction): PASS");
}

/// The printed coefficients carry three reliable decimals, and the system is
/// unstable (spectral radius ~1.77), so the deviation from the reference
/// minimal realization grows to ~3.6e-2 relative over 50 steps regardless of
/// the sign choice; 1e-6 agreement is unattainable for the printed data.
/// The threshold is asserted as stated and this test documents the failure.
#[test]
fn criterion_4_minimal_realization_match() {
    let case = builtin(ExampleId::Mech4);
    let (am, bm, cm, dm) = mech4_minimal_reference();
    let mut g = rng(44);
    let n = 50;
    let u = common::random_signal(&mut g, 2, n);
    let p = SchedulingTrajectory::constant(&[0.0], n).unwrap();
    let (init_y, init_u) = common::zero_windows(&case.model);
    let y_io = simulate_io(&case.model, &u, &p, &init_y, &init_u).unwrap();
    let y_ref = simulate_lti(&am, &bm, &cm, &dm, &DVector::zeros(3), &u).unwrap();
    let scale = 1.0 + y_ref.amax();
    let mut err: f64 = 0.0;
    for k in 0..n {
        err = err.max((y_io.sample(k) - y_ref.sample(k)).amax());
    }
    let rel = err / scale;
    assert!(
        rel < 1e-6,
        "direct realization vs reference minimal realization: relative error {rel:.3e} \
         exceeds 1e-6; the printed coefficients are rounded to 3 decimals and the \
         instability amplifies that rounding (noise floor ~3.6e-2 over 50 steps), \
         so this threshold cannot be met by the printed model"
    );
    println!("criterion 4 (minimal realization match): PASS");
}

#[test]
fn criterion_5_property_suite() {
    let tol = ToleranceConfig::default();

    // IO <-> SS simulation equivalence over 200 steps, 100 random models
    let mut g = rng(51);
    for i in 0..100 {
        let model = common::random_model(&mut g);
        let r = build_direct(&model).unwrap();
        let n = 200;
        let p = common::random_trajectory(&mut g, n);
        let u = common::random_signal(&mut g, model.n_u(), n);
        let (init_y, init_u) = common::zero_windows(&model);
        let y_io = simulate_io(&model, &u, &p, &init_y, &init_u).unwrap();
        let y_ss = simulate_ss(&r, &DVector::zeros(r.n_x()), &u, &p).unwrap();
        let scale = 1.0 + y_io.amax();
        for k in 0..n {
            let dev = (y_io.sample(k) - y_ss.outputs.sample(k)).amax();
            assert!(dev < 1e-9 * scale, "model {i} step {k}: {dev:.3e}");
        }
    }

    // general-kind realizations are never observable (k up to n_x + 2)
    let mut g = rng(52);
    for i in 0..100 {
        let model = common::random_general_model(&mut g);
        let r = build_direct(&model).unwrap();
        let traj = common::random_trajectory(&mut g, r.n_x() + 2);
        let o = observability_matrix(&r, &traj).unwrap();
        let rank = numerical_rank(&o, TolerancePolicy::default()).unwrap().rank;
        assert!(rank < r.n_x(), "model {i}: rank {rank} = n_x {}", r.n_x());
    }

    // unobservable directions decay: kernel annihilated by the F-product,
    // and the structural F is exactly nilpotent at the reconstruction horizon
    let mut g = rng(53);
    for i in 0..100 {
        let model = common::random_model(&mut g);
        let r = build_direct(&model).unwrap();
        let steps = model.n_a().max(model.n_b() - 1);
        let trials: Vec<_> = (0..3)
            .map(|_| common::random_trajectory(&mut g, steps.max(1)))
            .collect();
        let rec = check_reconstructability(&r, &trials, &tol).unwrap();
        assert!(
            rec.reconstructible && rec.max_residual < 1e-10,
            "model {i}: residual {:.3e}",
            rec.max_residual
        );
        let s = r.structural();
        let mut power = DMatrix::<f64>::identity(r.n_x(), r.n_x());
        for _ in 0..steps {
            power = &power * &s.f;
        }
        assert_eq!(power.amax(), 0.0, "model {i}: F^max(n_a, n_b-1) != 0");
    }

    // reduced observability form: T_k unit lower-block-triangular and
    // T_k O_k = Obar_k to 1e-12 relative
    let mut g = rng(54);
    for i in 0..100 {
        let model = common::random_general_model(&mut g);
        let r = build_direct(&model).unwrap();
        let traj = common::random_trajectory(&mut g, r.n_x().max(2));
        let red = transformed_observability(&r, &traj).unwrap();
        let o = observability_matrix(&r, &traj).unwrap();
        let n_y = model.n_y();
        let dim = red.t_k.nrows();
        for row in 0..dim {
            for col in 0..dim {
                let expected_identity = row == col;
                let in_upper_block = col >= (row / n_y + 1) * n_y;
                if expected_identity {
                    assert_eq!(red.t_k[(row, col)], 1.0, "model {i}");
                } else if in_upper_block || (col / n_y == row / n_y) {
                    assert_eq!(red.t_k[(row, col)], 0.0, "model {i} ({row},{col})");
                }
            }
        }
        let residual = (&red.t_k * &o - &red.obar_k).amax();
        let bound = 1e-12 * (1.0 + red.obar_k.amax());
        assert!(residual < bound, "model {i}: residual {residual:.3e}");
    }

    // FIR-kind reachability matrix has full rank for every trajectory
    let mut g = rng(55);
    for i in 0..100 {
        let model = common::random_fir_model(&mut g);
        let r = build_direct(&model).unwrap();
        let traj = common::random_trajectory(&mut g, r.n_x());
        let rm = reachability_matrix(&r, &traj).unwrap();
        let rank = numerical_rank(&rm, TolerancePolicy::default()).unwrap().rank;
        assert_eq!(rank, r.n_x(), "model {i}");
    }

    println!("criterion 5 (property suite): PASS");
}

#[test]
fn criterion_5_lti_three_route_equivalence() {
    // frozen SISO instances: the constant-scheduling conditions, the PBH
    // sweep over the eigenvalues of F (plus zero), and the rank of R_{n_x}
    // must agree on reachability, with zero disagreements over 200 draws
    let tol = ToleranceConfig::default();
    let mut g = rng(56);
    for i in 0..200 {
        let class = match i % 4 {
            0 | 1 => common::FrozenSisoClass::Generic,
            2 => common::FrozenSisoClass::CommonFactor,
            _ => common::FrozenSisoClass::OrderViolation,
        };
        let model = common::random_frozen_siso(&mut g, class);
        let r = build_direct(&model).unwrap();
        let p = [0.0];

        // route 1: the frozen sufficient conditions
        let conditions_pass = match r.kind() {
            StructureKind::General => {
                frozen_reachability_conditions(&r, &p, &tol).unwrap().passed
            }
            StructureKind::InverseFir => {
                let b0 = r.feedthrough(&p).unwrap();
                numerical_rank(&b0, TolerancePolicy::default()).unwrap().rank == model.n_y()
            }
            StructureKind::Fir => true,
        };

        // route 2: PBH pencil at every eigenvalue of F and at zero. The
        // spectrum comes structurally: F is block triangular, so it is the
        // companion roots of the output-side polynomial plus shift zeros.
        let a_eval: Vec<DMatrix<f64>> = (1..=model.n_a())
            .map(|i| {
                model
                    .eval_coefficient(CoefficientSide::A, i, &p)
                    .unwrap()
            })
            .collect();
        let coeffs: Vec<DMatrix<f64>> = a_eval.iter().rev().cloned().collect();
        let mut sigmas: Vec<Complex64> = matrix_poly_roots(&coeffs).unwrap().roots;
        sigmas.push(Complex64::new(0.0, 0.0));
        let pbh_pass = sigmas.iter().all(|&s| {
            let m = pbh_matrix(&r, &p, s).unwrap();
            numerical_rank_complex(&m, TolerancePolicy::Relative(1e-6))
                .unwrap()
                .rank
                == r.n_x()
        });

        // route 3: rank of the n_x-step reachability matrix
        let traj = SchedulingTrajectory::constant(&p, r.n_x()).unwrap();
        let rm = reachability_matrix(&r, &traj).unwrap();
        let r_pass =
            numerical_rank(&rm, TolerancePolicy::Relative(1e-6)).unwrap().rank == r.n_x();

        assert!(
            conditions_pass == pbh_pass && pbh_pass == r_pass,
            "instance {i}: conditions {conditions_pass}, PBH {pbh_pass}, R {r_pass}\n{model:?}"
        );
    }
    println!("criterion 5 (frozen three-route equivalence): PASS");
}

#[test]
fn criterion_6_response_identity_and_state_estimation() {
    // y = O_k x0 + Gamma u to 1e-9 over 50 random tuples
    let mut g = rng(61);
    for i in 0..50 {
        let model = common::random_model(&mut g);
        let r = build_direct(&model).unwrap();
        let k = (r.n_x() + 1).min(8);
        let p = common::random_trajectory(&mut g, k);
        let u = common::random_signal(&mut g, model.n_u(), k);
        let x0 = DVector::from_fn(r.n_x(), |_, _| g.gen_range(-1.0..1.0));
        let dec = response_decomposition(&r, &p).unwrap();
        let sim = simulate_ss(&r, &x0, &u, &p).unwrap();
        let predicted = &dec.o_k * &x0 + &dec.gamma * u.stacked();
        let actual = sim.outputs.stacked();
        let scale = 1.0 + actual.amax();
        let dev = (&predicted - &actual).amax();
        assert!(dev < 1e-9 * scale, "tuple {i}: deviation {dev:.3e}");
    }

    // the estimator recovers the observable projection of x0 to 1e-8
    let mut g = rng(62);
    for i in 0..50 {
        let model = common::random_model(&mut g);
        let r = build_direct(&model).unwrap();
        let k = r.n_x() + 2;
        let p = common::random_trajectory(&mut g, k);
        let u = common::random_signal(&mut g, model.n_u(), k);
        let x0 = DVector::from_fn(r.n_x(), |_, _| g.gen_range(-1.0..1.0));
        let sim = simulate_ss(&r, &x0, &u, &p).unwrap();
        let est = estimate_initial_state(&r, &p, &u, &sim.outputs).unwrap();
        // observable projection: subtract the kernel component
        let kern = &est.kernel_ambiguity;
        let projected = if kern.ncols() > 0 {
            &x0 - kern * (kern.transpose() * &x0)
        } else {
            x0.clone()
        };
        let dev = (&est.x0_hat - &projected).amax();
        assert!(
            dev < 1e-8 * (1.0 + x0.amax()),
            "tuple {i}: recovery deviation {dev:.3e} (kernel dim {})",
            kern.ncols()
        );
    }

    println!("criterion 6 (response identity and estimation): PASS");
}
