//! Shared generators for the integration suites: random LPV models with
//! bounded affine coefficients, random trajectories, and structured frozen
//! SISO instances for the cross-route reachability comparison.

#![allow(dead_code)]

use lpv_realize::model::{
    CoefficientMatrix, Interval, LaurentRational, LpvIoModel, SchedulingTrajectory, Term,
};
use lpv_realize::simulate::SignalTrajectory;
use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Affine scalar coefficient `c0 + c1 p` with both magnitudes below `amp`.
fn affine_entry(rng: &mut ChaCha8Rng, amp: f64) -> LaurentRational {
    let c0 = rng.gen_range(-amp..amp);
    let c1 = rng.gen_range(-amp..amp);
    LaurentRational::new(
        vec![Term::new(c0, vec![0]), Term::new(c1, vec![1])],
        vec![],
        1,
    )
    .unwrap()
}

fn affine_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, amp: f64) -> CoefficientMatrix {
    let entries = (0..rows * cols).map(|_| affine_entry(rng, amp)).collect();
    CoefficientMatrix::new(rows, cols, entries).unwrap()
}

/// Random model with the given orders, affine coefficients on `[-1, 1]`.
pub fn random_model_with_orders(
    rng: &mut ChaCha8Rng,
    n_y: usize,
    n_u: usize,
    n_a: usize,
    n_b: usize,
    amp: f64,
) -> LpvIoModel {
    let a = (0..n_a).map(|_| affine_matrix(rng, n_y, n_y, amp)).collect();
    let b = (0..n_b).map(|_| affine_matrix(rng, n_y, n_u, amp)).collect();
    LpvIoModel::new(
        n_y,
        n_u,
        1,
        a,
        b,
        vec![Interval::new(-1.0, 1.0).unwrap()],
    )
    .unwrap()
}

/// Random model of any non-degenerate kind, dims <= 3, orders <= 4.
pub fn random_model(rng: &mut ChaCha8Rng) -> LpvIoModel {
    let n_y = rng.gen_range(1..=3);
    let n_u = rng.gen_range(1..=3);
    let (n_a, n_b) = loop {
        let n_a = rng.gen_range(0..=4);
        let n_b = rng.gen_range(1..=4);
        if n_a > 0 || n_b > 1 {
            break (n_a, n_b);
        }
    };
    random_model_with_orders(rng, n_y, n_u, n_a, n_b, 0.8)
}

/// Random general-kind model (`n_a > 0`, `n_b > 1`).
pub fn random_general_model(rng: &mut ChaCha8Rng) -> LpvIoModel {
    let n_y = rng.gen_range(1..=3);
    let n_u = rng.gen_range(1..=3);
    let n_a = rng.gen_range(1..=4);
    let n_b = rng.gen_range(2..=4);
    random_model_with_orders(rng, n_y, n_u, n_a, n_b, 0.8)
}

/// Random FIR model (`n_a = 0`).
pub fn random_fir_model(rng: &mut ChaCha8Rng) -> LpvIoModel {
    let n_y = rng.gen_range(1..=3);
    let n_u = rng.gen_range(1..=3);
    let n_b = rng.gen_range(2..=4);
    random_model_with_orders(rng, n_y, n_u, 0, n_b, 0.8)
}

/// Random scheduling trajectory inside `[-1, 1]`.
pub fn random_trajectory(rng: &mut ChaCha8Rng, len: usize) -> SchedulingTrajectory {
    SchedulingTrajectory::new((0..len).map(|_| vec![rng.gen_range(-1.0..1.0)]).collect()).unwrap()
}

/// Random signal of the given dimension, entries in `[-1, 1]`.
pub fn random_signal(rng: &mut ChaCha8Rng, dim: usize, len: usize) -> SignalTrajectory {
    SignalTrajectory::new(
        (0..len)
            .map(|_| DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

/// Zero initial windows sized for the model.
pub fn zero_windows(model: &LpvIoModel) -> (Vec<DVector<f64>>, Vec<DVector<f64>>) {
    (
        vec![DVector::zeros(model.n_y()); model.n_a()],
        vec![DVector::zeros(model.n_u()); model.n_b() - 1],
    )
}

fn constant_model_from_polys(a: &[f64], b: &[f64]) -> LpvIoModel {
    // a = [a_1..a_{n_a}] lag coefficients, b = [b_0..b_{n_b-1}]
    let a_mats = a
        .iter()
        .map(|&v| CoefficientMatrix::constant(1, 1, &[v], 1).unwrap())
        .collect();
    let b_mats = b
        .iter()
        .map(|&v| CoefficientMatrix::constant(1, 1, &[v], 1).unwrap())
        .collect();
    LpvIoModel::new(
        1,
        1,
        1,
        a_mats,
        b_mats,
        vec![Interval::new(-1.0, 1.0).unwrap()],
    )
    .unwrap()
}

/// Multiplies a polynomial (ascending coefficients) by `(sigma - r)`.
fn mul_linear(coeffs: &[f64], r: f64) -> Vec<f64> {
    // coeffs[i] multiplies sigma^i; result degree + 1
    let mut out = vec![0.0; coeffs.len() + 1];
    for (i, &c) in coeffs.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * r;
    }
    out
}

/// Frozen SISO instance classes for the three-route reachability comparison.
pub enum FrozenSisoClass {
    /// Small integer coefficients; cancellations only ever exact.
    Generic,
    /// Output and input polynomials share one simple real root.
    CommonFactor,
    /// Both highest-lag coefficients are exactly zero (inflated order).
    OrderViolation,
}

/// Constant-coefficient SISO model, orders within 4.
pub fn random_frozen_siso(rng: &mut ChaCha8Rng, class: FrozenSisoClass) -> LpvIoModel {
    match class {
        FrozenSisoClass::Generic => {
            let n_a = rng.gen_range(1..=4);
            let n_b = rng.gen_range(1..=4);
            let a: Vec<f64> = (0..n_a).map(|_| rng.gen_range(-2i32..=2) as f64).collect();
            let mut b: Vec<f64> = (0..n_b).map(|_| rng.gen_range(-2i32..=2) as f64).collect();
            if b.iter().all(|&x| x == 0.0) {
                b[0] = 1.0;
            }
            constant_model_from_polys(&a, &b)
        }
        FrozenSisoClass::CommonFactor => {
            let n_a = rng.gen_range(1..=4);
            let n_b = rng.gen_range(2..=4);
            let mag = rng.gen_range(0.3..1.5);
            let r = if rng.gen_bool(0.5) { mag } else { -mag };
            // monic output-side polynomial of degree n_a: (sigma - r) * monic(n_a - 1)
            let mut p_rest = vec![0.0; n_a];
            p_rest[n_a - 1] = 1.0; // monic remainder, ascending coefficients
            for c in p_rest.iter_mut().take(n_a - 1) {
                *c = rng.gen_range(-2i32..=2) as f64;
            }
            let p_full = mul_linear(&p_rest, r); // degree n_a, monic
            // ascending p_full = [a_{n_a}, ..., a_1, 1]
            let a: Vec<f64> = (0..n_a).map(|i| p_full[n_a - 1 - i]).collect();
            // input side: (sigma - r) * random(n_b - 2) with nonzero leading
            let mut q_rest = vec![0.0; n_b - 1];
            for c in q_rest.iter_mut() {
                *c = rng.gen_range(-2i32..=2) as f64;
            }
            if q_rest[n_b - 2] == 0.0 {
                q_rest[n_b - 2] = 1.0;
            }
            let q_full = mul_linear(&q_rest, r); // degree n_b - 1
            let b: Vec<f64> = (0..n_b).map(|i| q_full[n_b - 1 - i]).collect();
            constant_model_from_polys(&a, &b)
        }
        FrozenSisoClass::OrderViolation => {
            let n_a = rng.gen_range(1..=4);
            let n_b = rng.gen_range(2..=4);
            let mut a: Vec<f64> = (0..n_a).map(|_| rng.gen_range(-2i32..=2) as f64).collect();
            let mut b: Vec<f64> = (0..n_b).map(|_| rng.gen_range(-2i32..=2) as f64).collect();
            *a.last_mut().unwrap() = 0.0;
            *b.last_mut().unwrap() = 0.0;
            if b[..n_b - 1].iter().all(|&x| x == 0.0) {
                b[0] = 1.0;
            }
            constant_model_from_polys(&a, &b)
        }
    }
}
