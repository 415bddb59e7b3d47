//! Sweep the constant-scheduling reachability conditions over a grid: the
//! coprimeness test at the companion roots plus the well-posedness rank.
//!
//! The first system loses reachability only at p = 1, where its input and
//! output polynomials share the root -1; the scheduling-independent second
//! system cancels at every frozen point.
//!
//! Run with: `cargo run --example reachability_sweep`

use lpv_realize::analysis::{check_reachability, ToleranceConfig};
use lpv_realize::builtin::{builtin, ExampleId};
use lpv_realize::realization::build_direct;

fn main() -> lpv_realize::Result<()> {
    let tol = ToleranceConfig::default();

    let case = builtin(ExampleId::Mech1);
    let r = build_direct(&case.model)?;
    let grid: Vec<Vec<f64>> = (0..11).map(|i| vec![1.0 + 0.1 * i as f64]).collect();
    let verdict = check_reachability(&r, &grid, &tol)?;
    println!("== sweeping p in [1, 2] (11 points) ==");
    for rec in &verdict.grid_records {
        let roots: Vec<String> = rec
            .roots_tested
            .iter()
            .map(|s| format!("{:.3}{:+.3}i", s[0], s[1]))
            .collect();
        println!(
            "p = {:>4.2}: roots {{{}}} -> {}",
            rec.p[0],
            roots.join(", "),
            if rec.passed {
                "conditions hold".to_string()
            } else {
                format!("failed, cancellations at {:?}", rec.coprimeness_failures)
            }
        );
    }
    println!(
        "verdict: {:?}, witness {:?}\n",
        verdict.structurally_reachable, verdict.witness_p
    );

    let case = builtin(ExampleId::Mech3);
    let r = build_direct(&case.model)?;
    let grid: Vec<Vec<f64>> = (0..101).map(|i| vec![-5.0 + 0.1 * i as f64]).collect();
    let verdict = check_reachability(&r, &grid, &tol)?;
    let failed = verdict.grid_records.iter().filter(|g| !g.passed).count();
    println!("== pole-zero cancelling system over [-5, 5] ==");
    println!(
        "{failed}/101 grid points fail; verdict: {:?}",
        verdict.structurally_reachable
    );
    println!("(the conditions are sufficient only, so nothing is concluded)");
    Ok(())
}
