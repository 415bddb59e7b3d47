//! Simulate the IO difference equation against its direct realization, then
//! recover the initial state from input-output data via the stacked response
//! decomposition.
//!
//! Run with: `cargo run --example simulate_and_estimate`

use lpv_realize::builtin::{builtin, ExampleId};
use lpv_realize::model::SchedulingTrajectory;
use lpv_realize::realization::build_direct;
use lpv_realize::simulate::{
    estimate_initial_state, simulate_io, simulate_ss, SignalTrajectory,
};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> lpv_realize::Result<()> {
    let case = builtin(ExampleId::Mech1);
    let model = &case.model;
    let r = build_direct(model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let n = 12;
    let p = SchedulingTrajectory::new((0..n).map(|_| vec![rng.gen_range(1.0..3.0)]).collect())?;
    let u = SignalTrajectory::new(
        (0..n)
            .map(|_| DVector::from_column_slice(&[rng.gen_range(-1.0..1.0)]))
            .collect(),
    )?;

    // the realization reproduces the difference equation from rest
    let init_y = vec![DVector::zeros(1); model.n_a()];
    let init_u = vec![DVector::zeros(1); model.n_b() - 1];
    let y_io = simulate_io(model, &u, &p, &init_y, &init_u)?;
    let y_ss = simulate_ss(&r, &DVector::zeros(r.n_x()), &u, &p)?;
    let mut worst: f64 = 0.0;
    for k in 0..n {
        worst = worst.max((y_io.sample(k) - y_ss.outputs.sample(k)).amax());
    }
    println!("IO vs state-space simulation: max deviation {worst:e}");

    // estimate a hidden initial state from data generated by it
    let x0 = DVector::from_column_slice(&[0.8, -0.5, 0.3]);
    let data = simulate_ss(&r, &x0, &u, &p)?;
    let est = estimate_initial_state(&r, &p, &u, &data.outputs)?;
    println!("true x0      = {}", x0.transpose());
    println!("estimated    = {}", est.x0_hat.transpose());
    println!("fit residual = {:e}", est.residual);
    println!(
        "ambiguity: {} unobservable direction(s); the estimate recovers the \
         projection of x0 onto their complement",
        est.kernel_ambiguity.ncols()
    );
    Ok(())
}
