//! The direct realization is never observable: compute the observability
//! matrix over a trajectory, reduce it to the structured form, inspect the
//! unobservable kernel, and verify that those directions still vanish after
//! finitely many steps (reconstructability).
//!
//! Run with: `cargo run --example observability_kernel`

use lpv_realize::analysis::{
    check_reconstructability, observability_matrix, transformed_observability, ToleranceConfig,
};
use lpv_realize::builtin::{builtin, mech1_unobservable_direction, ExampleId};
use lpv_realize::model::SchedulingTrajectory;
use lpv_realize::numerics::{numerical_rank, subspace_equal, TolerancePolicy};
use lpv_realize::realization::build_direct;

fn main() -> lpv_realize::Result<()> {
    let case = builtin(ExampleId::Mech1);
    let r = build_direct(&case.model)?;

    let traj = SchedulingTrajectory::new(vec![vec![1.5], vec![2.0], vec![1.2], vec![3.0]])?;
    let o4 = observability_matrix(&r, &traj)?;
    let rank = numerical_rank(&o4, TolerancePolicy::default())?;
    println!(
        "O_4 is {}x{} with numerical rank {} < n_x = {}",
        o4.nrows(),
        o4.ncols(),
        rank.rank,
        r.n_x()
    );

    let red = transformed_observability(&r, &traj)?;
    println!("reduced form (rows beyond the orders vanish): Obar_4 = {}", red.obar_k);
    let residual = (&red.t_k * &o4 - &red.obar_k).amax();
    println!("|T_4 O_4 - Obar_4|_max = {residual:e}");

    let kernel = numerical_rank(&red.obar_k, TolerancePolicy::default())?.kernel_basis;
    let predicted = mech1_unobservable_direction(traj.point(0)[0]);
    let cmp = subspace_equal(
        &kernel,
        &nalgebra::DMatrix::from_column_slice(3, 1, predicted.as_slice()),
        1e-8,
    )?;
    println!(
        "kernel dimension {}; matches [0, b_1(p_0), a_2(p_0)]: {} (angle {:e})",
        kernel.ncols(),
        cmp.equal,
        cmp.principal_angles.last().copied().unwrap_or(0.0),
    );

    // unobservable directions are harmless: they decay in max(n_a, n_b-1) steps
    let tol = ToleranceConfig::default();
    let trials = vec![
        SchedulingTrajectory::new(vec![vec![1.5], vec![2.0]])?,
        SchedulingTrajectory::new(vec![vec![4.0], vec![1.1]])?,
    ];
    let rec = check_reconstructability(&r, &trials, &tol)?;
    println!(
        "reconstructible in {} steps (residual {:e})",
        rec.steps, rec.max_residual
    );
    Ok(())
}
