//! Frozen-scheduling analysis of the two-output benchmark: companion roots,
//! the coprimeness rank drop, Kalman-style dimensions, and the Lyapunov
//! stability verdict.
//!
//! Run with: `cargo run --example frozen_decomposition`

use lpv_realize::analysis::{
    frozen_kalman_decomposition, frozen_reachability_conditions, ToleranceConfig,
};
use lpv_realize::builtin::{builtin, ExampleId};
use lpv_realize::numerics::solve_discrete_lyapunov;
use lpv_realize::realization::build_direct;
use nalgebra::DMatrix;

fn main() -> lpv_realize::Result<()> {
    let tol = ToleranceConfig::default();
    let case = builtin(ExampleId::Mech4);
    let r = build_direct(&case.model)?;
    let p = [0.0];

    let rec = frozen_reachability_conditions(&r, &p, &tol)?;
    println!("companion roots of the output-side polynomial:");
    for s in &rec.roots_tested {
        println!("  {:+.5} {:+.5}i", s[0], s[1]);
    }
    println!("well-posedness rank = {:?}", rec.well_posedness_rank);
    for f in &rec.coprimeness_failures {
        println!(
            "coprimeness fails at sigma = {:+.5}{:+.5}i with rank {} < n_y = {}",
            f.sigma[0],
            f.sigma[1],
            f.rank,
            case.model.n_y()
        );
    }

    let kd = frozen_kalman_decomposition(&r, &p, &tol)?;
    println!(
        "\nfrozen Kalman dimensions: n_x = {}, reachable = {}, observable = {}, minimal = {}",
        r.n_x(),
        kd.reachable_dim,
        kd.observable_dim,
        kd.minimal_order
    );
    println!(
        "unreachable subspace dim {}, unobservable subspace dim {}",
        kd.unreachable_basis.ncols(),
        kd.unobservable_basis.ncols()
    );

    let e = r.eval(&p)?;
    let lyap = solve_discrete_lyapunov(&e.f, &DMatrix::identity(r.n_x(), r.n_x()))?;
    println!("\nfrozen Lyapunov verdict: {:?}", lyap.status);
    Ok(())
}
