//! Time-domain engine: simulate the IO difference equation and the direct
//! realization, build the stacked response decomposition, estimate initial
//! states, and apply time-varying state transformations.

use crate::analysis::observability_matrix;
use crate::error::{Error, Result};
use crate::model::{LpvIoModel, SchedulingTrajectory};
use crate::numerics::{numerical_rank, TolerancePolicy};
use crate::realization::DirectRealization;
use nalgebra::{DMatrix, DVector};

/// Finite signal trajectory: ordered samples of a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalTrajectory {
    samples: Vec<DVector<f64>>,
    dim: usize,
    start_index: i64,
}

impl SignalTrajectory {
    pub fn new(samples: Vec<DVector<f64>>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Trajectory("signal trajectory is empty".into()));
        }
        let dim = samples[0].len();
        if dim == 0 || samples.iter().any(|s| s.len() != dim) {
            return Err(Error::Trajectory(
                "signal samples must share a positive dimension".into(),
            ));
        }
        Ok(SignalTrajectory {
            samples,
            dim,
            start_index: 0,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        SignalTrajectory::new(
            rows.iter()
                .map(|r| DVector::from_column_slice(r))
                .collect(),
        )
    }

    pub fn zeros(dim: usize, len: usize) -> Self {
        SignalTrajectory {
            samples: vec![DVector::zeros(dim); len],
            dim,
            start_index: 0,
        }
    }

    pub fn with_start_index(mut self, start: i64) -> Self {
        self.start_index = start;
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn start_index(&self) -> i64 {
        self.start_index
    }

    pub fn sample(&self, k: usize) -> &DVector<f64> {
        &self.samples[k]
    }

    pub fn samples(&self) -> &[DVector<f64>] {
        &self.samples
    }

    /// Stacks all samples into one column vector.
    pub fn stacked(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim * self.len());
        for (k, s) in self.samples.iter().enumerate() {
            v.rows_mut(k * self.dim, self.dim).copy_from(s);
        }
        v
    }

    /// Largest absolute sample entry.
    pub fn amax(&self) -> f64 {
        self.samples.iter().map(|s| s.amax()).fold(0.0, f64::max)
    }
}

fn check_lengths(u: &SignalTrajectory, p: &SchedulingTrajectory) -> Result<()> {
    if u.len() != p.len() {
        return Err(Error::Trajectory(format!(
            "input trajectory has {} steps but scheduling trajectory has {}",
            u.len(),
            p.len()
        )));
    }
    Ok(())
}

/// Simulates the IO difference equation over the trajectory.
///
/// `init_y` holds exactly `n_a` output lags and `init_u` exactly `n_b - 1`
/// input lags, newest first (`init_y[0]` is `y_{-1}`).
///
/// Accumulation order is pinned: output lags first, then input lags from the
/// oldest down to lag one, feedthrough last. Coefficient pairs that cancel
/// algebraically then cancel exactly in floating point as well.
pub fn simulate_io(
    model: &LpvIoModel,
    u: &SignalTrajectory,
    p: &SchedulingTrajectory,
    init_y: &[DVector<f64>],
    init_u: &[DVector<f64>],
) -> Result<SignalTrajectory> {
    check_lengths(u, p)?;
    let (n_a, n_b) = (model.n_a(), model.n_b());
    if init_y.len() != n_a {
        return Err(Error::Trajectory(format!(
            "init_y has {} entries, expected n_a = {n_a}",
            init_y.len()
        )));
    }
    if init_u.len() != n_b - 1 {
        return Err(Error::Trajectory(format!(
            "init_u has {} entries, expected n_b - 1 = {}",
            init_u.len(),
            n_b - 1
        )));
    }
    if u.dim() != model.n_u() {
        return Err(Error::DimensionMismatch(format!(
            "input dimension {} does not match n_u = {}",
            u.dim(),
            model.n_u()
        )));
    }
    for w in init_y.iter() {
        if w.len() != model.n_y() {
            return Err(Error::DimensionMismatch("init_y sample size".into()));
        }
    }
    for w in init_u.iter() {
        if w.len() != model.n_u() {
            return Err(Error::DimensionMismatch("init_u sample size".into()));
        }
    }

    let n = u.len();
    let mut ys: Vec<DVector<f64>> = Vec::with_capacity(n);
    // lag i (1-based) for y at step k: k >= i -> ys[k-i], else init_y[i-1-k]
    let y_lag = |ys: &Vec<DVector<f64>>, k: usize, i: usize| -> DVector<f64> {
        if k >= i {
            ys[k - i].clone()
        } else {
            init_y[i - 1 - k].clone()
        }
    };
    let u_lag = |k: usize, i: usize| -> DVector<f64> {
        if k >= i {
            u.sample(k - i).clone()
        } else {
            init_u[i - 1 - k].clone()
        }
    };
    for k in 0..n {
        let pk = p.point(k);
        let mut acc = DVector::<f64>::zeros(model.n_y());
        for i in 1..=n_a {
            let a_i = model.a_coeffs()[i - 1].eval(pk).map_err(|e| e.at_step(k))?;
            acc -= a_i * y_lag(&ys, k, i);
        }
        for i in (1..n_b).rev() {
            let b_i = model.b_coeffs()[i].eval(pk).map_err(|e| e.at_step(k))?;
            acc += b_i * u_lag(k, i);
        }
        let b_0 = model.b_coeffs()[0].eval(pk).map_err(|e| e.at_step(k))?;
        acc += b_0 * u.sample(k);
        ys.push(acc);
    }
    SignalTrajectory::new(ys)
}

/// State and output sequences of a state-space simulation.
#[derive(Debug, Clone)]
pub struct SsSimulation {
    /// `x_0 .. x_N` (one more entry than the horizon).
    pub states: Vec<DVector<f64>>,
    pub outputs: SignalTrajectory,
}

/// Simulates the direct realization from `x0`.
pub fn simulate_ss(
    r: &DirectRealization,
    x0: &DVector<f64>,
    u: &SignalTrajectory,
    p: &SchedulingTrajectory,
) -> Result<SsSimulation> {
    check_lengths(u, p)?;
    if x0.len() != r.n_x() {
        return Err(Error::DimensionMismatch(format!(
            "x0 has length {}, expected n_x = {}",
            x0.len(),
            r.n_x()
        )));
    }
    let n = u.len();
    let mut states = Vec::with_capacity(n + 1);
    let mut outputs = Vec::with_capacity(n);
    let mut x = x0.clone();
    for k in 0..n {
        let m = r.eval(p.point(k)).map_err(|e| e.at_step(k))?;
        states.push(x.clone());
        outputs.push(&m.h * &x + &m.j * u.sample(k));
        x = &m.f * &x + &m.g * u.sample(k);
    }
    states.push(x);
    Ok(SsSimulation {
        states,
        outputs: SignalTrajectory::new(outputs)?,
    })
}

/// Packs initial lag windows into the state vector, newest lag first.
pub fn pack_initial_state(
    r: &DirectRealization,
    init_y: &[DVector<f64>],
    init_u: &[DVector<f64>],
) -> Result<DVector<f64>> {
    let model = r.model();
    if init_y.len() != model.n_a() || init_u.len() != model.n_b() - 1 {
        return Err(Error::Trajectory(
            "initial windows must have exactly n_a and n_b - 1 entries".into(),
        ));
    }
    let mut x = DVector::zeros(r.n_x());
    let n_y = model.n_y();
    let n_u = model.n_u();
    for (i, w) in init_y.iter().enumerate() {
        x.rows_mut(i * n_y, n_y).copy_from(w);
    }
    let off = n_y * model.n_a();
    for (i, w) in init_u.iter().enumerate() {
        x.rows_mut(off + i * n_u, n_u).copy_from(w);
    }
    Ok(x)
}

/// Stacked response decomposition `y = O_k x0 + Gamma u` over a trajectory.
///
/// `gamma` is assembled column-by-column from zero-state impulse responses,
/// so the identity holds with a plus sign by construction.
#[derive(Debug, Clone)]
pub struct ResponseDecomposition {
    pub o_k: DMatrix<f64>,
    pub gamma: DMatrix<f64>,
    pub sign_convention: SignConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// `y = O_k x0 + Gamma u`, the sign produced by forward simulation.
    AsSimulated,
}

/// Builds the response decomposition for the trajectory.
pub fn response_decomposition(
    r: &DirectRealization,
    p: &SchedulingTrajectory,
) -> Result<ResponseDecomposition> {
    let k = p.len();
    let (n_y, n_u) = (r.n_y(), r.n_u());
    let o_k = observability_matrix(r, p)?;
    let mut gamma = DMatrix::zeros(n_y * k, n_u * k);
    for j in 0..k {
        for c in 0..n_u {
            let mut impulse = SignalTrajectory::zeros(n_u, k);
            impulse.samples[j][c] = 1.0;
            let sim = simulate_ss(r, &DVector::zeros(r.n_x()), &impulse, p)?;
            gamma.set_column(j * n_u + c, &sim.outputs.stacked());
        }
    }
    Ok(ResponseDecomposition {
        o_k,
        gamma,
        sign_convention: SignConvention::AsSimulated,
    })
}

/// Least-squares initial-state estimate from input-output data.
#[derive(Debug, Clone)]
pub struct InitialStateEstimate {
    pub x0_hat: DVector<f64>,
    /// Norm of the unexplained output residual.
    pub residual: f64,
    /// Orthonormal basis of the unobservable ambiguity.
    pub kernel_ambiguity: DMatrix<f64>,
}

/// Inverts the stacked response map: `x0_hat = pinv(O_k) (y - Gamma u)`.
/// The kernel of `O_k` is reported as the estimate's ambiguity, not an error.
pub fn estimate_initial_state(
    r: &DirectRealization,
    p: &SchedulingTrajectory,
    u: &SignalTrajectory,
    y: &SignalTrajectory,
) -> Result<InitialStateEstimate> {
    check_lengths(u, p)?;
    if y.len() != p.len() {
        return Err(Error::Trajectory(format!(
            "output trajectory has {} steps but scheduling trajectory has {}",
            y.len(),
            p.len()
        )));
    }
    let dec = response_decomposition(r, p)?;
    let rhs = y.stacked() - &dec.gamma * u.stacked();
    let pinv = dec
        .o_k
        .clone()
        .try_svd(true, true, f64::EPSILON, 100_000)
        .ok_or(Error::EigenFailure(r.n_x()))?
        .pseudo_inverse(1e-12 * dec.o_k.amax().max(1.0))
        .map_err(|m| Error::Trajectory(format!("pseudoinverse failed: {m}")))?;
    let x0_hat = &pinv * &rhs;
    let residual = (&dec.o_k * &x0_hat - &rhs).norm();
    let kernel = numerical_rank(&dec.o_k, TolerancePolicy::default())?.kernel_basis;
    Ok(InitialStateEstimate {
        x0_hat,
        residual,
        kernel_ambiguity: kernel,
    })
}

/// One step of a time-varying transformed realization.
#[derive(Debug, Clone)]
pub struct TransformedStep {
    pub f: DMatrix<f64>,
    pub g: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub j: DMatrix<f64>,
}

/// Condition-number ceiling for the per-point transformation matrices.
pub const TRANSFORM_CONDITION_LIMIT: f64 = 1e12;

/// Applies the time-varying state transformation `x_k = T(p_k) z_k` along a
/// trajectory, producing per-step tuples
/// `(T(p_{k+1})^{-1} F(p_k) T(p_k), T(p_{k+1})^{-1} G(p_k), H(p_k) T(p_k), J(p_k))`
/// for `k = 0 .. N-2`.
pub fn transform_along_trajectory<T>(
    r: &DirectRealization,
    t_eval: T,
    p: &SchedulingTrajectory,
) -> Result<Vec<TransformedStep>>
where
    T: Fn(&[f64]) -> DMatrix<f64>,
{
    let n = p.len();
    if n < 2 {
        return Err(Error::Trajectory(
            "transformation needs at least two scheduling points".into(),
        ));
    }
    let n_x = r.n_x();
    let mut inverses = Vec::with_capacity(n);
    let mut transforms = Vec::with_capacity(n);
    for (k, point) in p.points().iter().enumerate() {
        let t = t_eval(point);
        if t.nrows() != n_x || t.ncols() != n_x {
            return Err(Error::DimensionMismatch(format!(
                "T(p) must be {n_x}x{n_x}"
            )));
        }
        let svd = t
            .clone()
            .try_svd(true, true, f64::EPSILON, 100_000)
            .ok_or(Error::EigenFailure(n_x))?;
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !cond.is_finite() || cond >= TRANSFORM_CONDITION_LIMIT {
            return Err(Error::SingularTransform { step: k, cond });
        }
        let inv = svd
            .pseudo_inverse(0.0)
            .map_err(|m| Error::Trajectory(format!("inverse failed: {m}")))?;
        inverses.push(inv);
        transforms.push(t);
    }
    let mut steps = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let m = r.eval(p.point(k)).map_err(|e| e.at_step(k))?;
        steps.push(TransformedStep {
            f: &inverses[k + 1] * &m.f * &transforms[k],
            g: &inverses[k + 1] * &m.g,
            h: &m.h * &transforms[k],
            j: m.j.clone(),
        });
    }
    Ok(steps)
}

/// Simulates a sequence of per-step realizations (as produced by
/// `transform_along_trajectory`) from `z0`.
pub fn simulate_steps(
    steps: &[TransformedStep],
    z0: &DVector<f64>,
    u: &SignalTrajectory,
) -> Result<SignalTrajectory> {
    if u.len() > steps.len() {
        return Err(Error::Trajectory(format!(
            "input has {} steps but only {} realization tuples are available",
            u.len(),
            steps.len()
        )));
    }
    let mut z = z0.clone();
    let mut out = Vec::with_capacity(u.len());
    for (s, uk) in steps.iter().zip(u.samples()) {
        out.push(&s.h * &z + &s.j * uk);
        z = &s.f * &z + &s.g * uk;
    }
    SignalTrajectory::new(out)
}

/// Simulates a constant (LTI) state-space system; used to compare against
/// reference minimal realizations.
pub fn simulate_lti(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
    x0: &DVector<f64>,
    u: &SignalTrajectory,
) -> Result<SignalTrajectory> {
    let mut x = x0.clone();
    let mut out = Vec::with_capacity(u.len());
    for k in 0..u.len() {
        out.push(c * &x + d * u.sample(k));
        x = a * &x + b * u.sample(k);
    }
    SignalTrajectory::new(out)
}
