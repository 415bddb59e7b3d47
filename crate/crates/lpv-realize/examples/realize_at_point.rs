//! Build the direct realization of a scheduling-dependent model and evaluate
//! its system matrices at a few points.
//!
//! Run with: `cargo run --example realize_at_point`

use lpv_realize::builtin::{builtin, ExampleId};
use lpv_realize::realization::build_direct;

fn main() -> lpv_realize::Result<()> {
    let case = builtin(ExampleId::Mech3);
    let model = &case.model;
    println!(
        "model: n_y = {}, n_u = {}, orders n_a = {}, n_b = {}",
        model.n_y(),
        model.n_u(),
        model.n_a(),
        model.n_b()
    );

    let r = build_direct(model)?;
    println!("kind = {:?}, state dimension n_x = {}", r.kind(), r.n_x());
    println!("state = [y_(k-1); u_(k-1)] stacked from the lagged signals\n");

    for p in [[1.0], [5.0], [-2.0]] {
        let m = r.eval(&p)?;
        println!("at p = {:>4}: F = {}", p[0], m.f);
        println!("          G^T = {}", m.g.transpose());
        println!("          H   = {}", m.h);
        println!("          J   = {}", m.j);
    }

    // the transition identity F(p) = F + G H(p) holds exactly
    let s = r.structural();
    let m = r.eval(&[3.0])?;
    let rebuilt = &s.f + &s.g * &m.h;
    println!("max |F(3) - (F + G H(3))| = {:e}", (&m.f - rebuilt).amax());
    Ok(())
}
