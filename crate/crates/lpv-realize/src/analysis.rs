//! Structural analysis of the direct realization: reachability and
//! observability matrices over scheduling trajectories, the PBH pencil,
//! constant-scheduling reachability conditions evaluated over a grid, the
//! reduced observability form, reconstructability, and frozen-scheduling
//! Kalman decomposition with a Lyapunov stability check.

use crate::error::{Error, Result};
use crate::model::{LpvIoModel, SchedulingTrajectory};
use crate::numerics::{
    matrix_poly_roots, numerical_rank, numerical_rank_complex, solve_discrete_lyapunov,
    LyapunovStatus, TolerancePolicy, DEFAULT_RANK_EPSILON, SUBSPACE_ANGLE_TOLERANCE,
};
use crate::realization::{build_direct, DirectRealization, StructureKind};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Relative epsilon for the coprimeness rank test at polynomial roots.
/// Evaluating at computed roots leaves residue well above machine precision
/// (root conditioning, printed-data rounding), so this is far looser than
/// the generic rank epsilon.
pub const COPRIMENESS_EPSILON: f64 = 1e-3;

/// Absolute floor of the coprimeness tolerance, scaled by the magnitude of
/// the evaluated coefficients. Catches the case where an entire row of the
/// test matrix collapses (exact pole-zero cancellation).
pub const COPRIMENESS_FLOOR_SCALE: f64 = 1e-6;

/// Relative rank epsilon for frozen-scheduling Kalman decompositions.
/// Sized for coefficient data carrying roughly 3 reliable decimals.
pub const FROZEN_RANK_EPSILON: f64 = 1.5e-6;

/// Normalized residual threshold for the reconstructability check.
pub const RECONSTRUCTABILITY_TOLERANCE: f64 = 1e-10;

/// All thresholds used by the analysis, echoed verbatim into every report.
#[derive(Debug, Clone, Serialize)]
pub struct ToleranceConfig {
    pub rank_epsilon: f64,
    pub coprimeness_epsilon: f64,
    pub coprimeness_floor_scale: f64,
    pub frozen_rank_epsilon: f64,
    pub reconstructability_tolerance: f64,
    pub subspace_angle_tolerance: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_epsilon: DEFAULT_RANK_EPSILON,
            coprimeness_epsilon: COPRIMENESS_EPSILON,
            coprimeness_floor_scale: COPRIMENESS_FLOOR_SCALE,
            frozen_rank_epsilon: FROZEN_RANK_EPSILON,
            reconstructability_tolerance: RECONSTRUCTABILITY_TOLERANCE,
            subspace_angle_tolerance: SUBSPACE_ANGLE_TOLERANCE,
        }
    }
}

impl ToleranceConfig {
    fn default_policy(&self) -> TolerancePolicy {
        TolerancePolicy::Relative(self.rank_epsilon)
    }

    fn frozen_policy(&self) -> TolerancePolicy {
        TolerancePolicy::Relative(self.frozen_rank_epsilon)
    }

    fn data_policy(&self, scale: f64) -> TolerancePolicy {
        TolerancePolicy::RelativeWithFloor {
            epsilon: self.rank_epsilon,
            floor: self.coprimeness_floor_scale * scale,
        }
    }

    fn coprimeness_policy(&self, scale: f64) -> TolerancePolicy {
        TolerancePolicy::RelativeWithFloor {
            epsilon: self.coprimeness_epsilon,
            floor: self.coprimeness_floor_scale * scale,
        }
    }
}

// ---------------------------------------------------------------------------
// Trajectory-dependent structure matrices.
// ---------------------------------------------------------------------------

/// `k`-step reachability matrix over the trajectory: block columns
/// `F(p_{k-1})...F(p_{i+1}) G(p_i)`, rightmost block `G(p_{k-1})`.
pub fn reachability_matrix(
    r: &DirectRealization,
    p_traj: &SchedulingTrajectory,
) -> Result<DMatrix<f64>> {
    let k = p_traj.len();
    let (n_x, n_u) = (r.n_x(), r.n_u());
    let evals: Vec<_> = p_traj
        .points()
        .iter()
        .enumerate()
        .map(|(j, p)| r.eval(p).map_err(|e| e.at_step(j)))
        .collect::<Result<_>>()?;
    let mut m = DMatrix::zeros(n_x, n_u * k);
    let mut acc = DMatrix::<f64>::identity(n_x, n_x);
    for i in (0..k).rev() {
        let block = &acc * &evals[i].g;
        m.view_mut((0, i * n_u), (n_x, n_u)).copy_from(&block);
        if i > 0 {
            acc = &acc * &evals[i].f;
        }
    }
    Ok(m)
}

/// `k`-step observability matrix over the trajectory: block rows
/// `H(p_0)`, `H(p_1) F(p_0)`, ..., `H(p_{k-1}) F(p_{k-2})...F(p_0)`.
pub fn observability_matrix(
    r: &DirectRealization,
    p_traj: &SchedulingTrajectory,
) -> Result<DMatrix<f64>> {
    let k = p_traj.len();
    let (n_x, n_y) = (r.n_x(), r.n_y());
    let mut m = DMatrix::zeros(n_y * k, n_x);
    let mut acc = DMatrix::<f64>::identity(n_x, n_x);
    for (j, p) in p_traj.points().iter().enumerate() {
        let e = r.eval(p).map_err(|err| err.at_step(j))?;
        let row = &e.h * &acc;
        m.view_mut((j * n_y, 0), (n_y, n_x)).copy_from(&row);
        acc = &e.f * &acc;
    }
    Ok(m)
}

/// Reduced observability form: a unit lower-block-triangular `T_k` such that
/// `T_k O_k = Obar_k`, with `Obar_k` built directly from the coefficient
/// functions and shift powers: block row `j` is
/// `[-A(p_j) F_a^j | B(p_j) F_b^j]`.
#[derive(Debug, Clone)]
pub struct TransformedObservability {
    pub t_k: DMatrix<f64>,
    pub obar_k: DMatrix<f64>,
}

pub fn transformed_observability(
    r: &DirectRealization,
    p_traj: &SchedulingTrajectory,
) -> Result<TransformedObservability> {
    let k = p_traj.len();
    let (n_x, n_y) = (r.n_x(), r.n_y());
    let s = r.structural();
    let na_dim = s.f_a.nrows();
    let nb_dim = s.f_b.nrows();

    // powers of the shift blocks and of F = blkdiag(F_a, F_b)
    let mut fa_pow = vec![DMatrix::<f64>::identity(na_dim, na_dim)];
    let mut fb_pow = vec![DMatrix::<f64>::identity(nb_dim, nb_dim)];
    let mut f_pow = vec![DMatrix::<f64>::identity(n_x, n_x)];
    for j in 1..k {
        fa_pow.push(&fa_pow[j - 1] * &s.f_a);
        fb_pow.push(&fb_pow[j - 1] * &s.f_b);
        f_pow.push(&f_pow[j - 1] * &s.f);
    }

    let mut obar = DMatrix::zeros(n_y * k, n_x);
    let mut h_rows = Vec::with_capacity(k);
    for (j, p) in p_traj.points().iter().enumerate() {
        let a = r.stacked_a(p).map_err(|e| e.at_step(j))?;
        let b = r.stacked_b(p).map_err(|e| e.at_step(j))?;
        let left = -&a * &fa_pow[j];
        let right = &b * &fb_pow[j];
        obar.view_mut((j * n_y, 0), (n_y, na_dim)).copy_from(&left);
        obar.view_mut((j * n_y, na_dim), (n_y, nb_dim))
            .copy_from(&right);
        let mut h = DMatrix::zeros(n_y, n_x);
        h.view_mut((0, 0), (n_y, na_dim)).copy_from(&(-&a));
        h.view_mut((0, na_dim), (n_y, nb_dim)).copy_from(&b);
        h_rows.push(h);
    }

    let mut t_k = DMatrix::<f64>::identity(n_y * k, n_y * k);
    for j in 1..k {
        for i in 0..j {
            // block row j, block column i: -H(p_j) F^{j-1-i} G
            let block = -&h_rows[j] * &f_pow[j - 1 - i] * &s.g;
            t_k.view_mut((j * n_y, i * n_y), (n_y, n_y)).copy_from(&block);
        }
    }
    Ok(TransformedObservability { t_k, obar_k: obar })
}

/// PBH pencil `[F(p) - sigma I | G(p)]` at a frozen point.
pub fn pbh_matrix(
    r: &DirectRealization,
    p: &[f64],
    sigma: Complex64,
) -> Result<DMatrix<Complex64>> {
    let e = r.eval(p)?;
    let (n_x, n_u) = (r.n_x(), r.n_u());
    let mut m = DMatrix::<Complex64>::zeros(n_x, n_x + n_u);
    for i in 0..n_x {
        for j in 0..n_x {
            m[(i, j)] = Complex64::new(e.f[(i, j)], 0.0);
        }
        m[(i, i)] -= sigma;
        for j in 0..n_u {
            m[(i, n_x + j)] = Complex64::new(e.g[(i, j)], 0.0);
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Constant-scheduling reachability conditions.
// ---------------------------------------------------------------------------

/// A root at which the coprimeness rank test failed, with the rank found.
#[derive(Debug, Clone, Serialize)]
pub struct CoprimenessFailure {
    pub sigma: [f64; 2],
    pub rank: usize,
}

/// Everything evaluated at one grid point for the reachability check.
#[derive(Debug, Clone, Serialize)]
pub struct GridPointRecord {
    pub p: Vec<f64>,
    pub passed: bool,
    /// Nonzero roots swept by the coprimeness test (re/im pairs).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub roots_tested: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "is_zero")]
    pub zero_root_count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coprimeness_failures: Vec<CoprimenessFailure>,
    /// Rank of `[-A_{n_a} | B_{n_b-1}]` (well-posedness condition).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub well_posedness_rank: Option<usize>,
    /// Rank of `B_0` for inverse-FIR models.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feedthrough_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        0.0
    } else {
        m.amax()
    }
}

/// Evaluates the two constant-scheduling reachability conditions at `p`:
/// the coprimeness rank test at every nonzero root of the output-side
/// matrix polynomial, and the well-posedness rank of the highest-lag
/// coefficients. Sufficient for structural reachability of the general-kind
/// realization; also necessary in the frozen LTI sense.
pub fn frozen_reachability_conditions(
    r: &DirectRealization,
    p: &[f64],
    tol: &ToleranceConfig,
) -> Result<GridPointRecord> {
    let model = r.model();
    let (n_y, n_u, n_a, n_b) = (model.n_y(), model.n_u(), model.n_a(), model.n_b());
    debug_assert!(n_a > 0, "coprimeness sweep needs output lags");

    let a_eval: Vec<DMatrix<f64>> = model
        .a_coeffs()
        .iter()
        .map(|c| c.eval(p))
        .collect::<Result<_>>()?;
    let b_eval: Vec<DMatrix<f64>> = model
        .b_coeffs()
        .iter()
        .map(|c| c.eval(p))
        .collect::<Result<_>>()?;
    let scale = 1.0
        + a_eval
            .iter()
            .chain(b_eval.iter())
            .map(max_abs)
            .fold(0.0, f64::max);

    // ascending powers: coefficient of sigma^j is A_{n_a - j}
    let coeffs: Vec<DMatrix<f64>> = a_eval.iter().rev().cloned().collect();
    let roots = matrix_poly_roots(&coeffs)?;

    let mut failures = Vec::new();
    for &sigma in &roots.roots {
        // [I + sum sigma^{-i} A_i | sum sigma^{-i} B_i]
        let mut m = DMatrix::<Complex64>::zeros(n_y, n_y + n_u);
        for i in 0..n_y {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        let mut s_pow = Complex64::new(1.0, 0.0);
        for i in 1..=n_a.max(n_b - 1) {
            s_pow /= sigma;
            if i <= n_a {
                for row in 0..n_y {
                    for col in 0..n_y {
                        m[(row, col)] += s_pow * a_eval[i - 1][(row, col)];
                    }
                }
            }
            if i < n_b {
                for row in 0..n_y {
                    for col in 0..n_u {
                        m[(row, n_y + col)] += s_pow * b_eval[i][(row, col)];
                    }
                }
            }
        }
        for row in 0..n_y {
            for col in 0..n_u {
                m[(row, n_y + col)] += Complex64::new(b_eval[0][(row, col)], 0.0);
            }
        }
        let rank = numerical_rank_complex(&m, tol.coprimeness_policy(scale))?.rank;
        if rank < n_y {
            failures.push(CoprimenessFailure {
                sigma: [sigma.re, sigma.im],
                rank,
            });
        }
    }

    // [-A_{n_a} | B_{n_b-1}]
    let mut w = DMatrix::<f64>::zeros(n_y, n_y + n_u);
    w.view_mut((0, 0), (n_y, n_y))
        .copy_from(&(-&a_eval[n_a - 1]));
    w.view_mut((0, n_y), (n_y, n_u)).copy_from(&b_eval[n_b - 1]);
    let wp_rank = numerical_rank(&w, tol.data_policy(scale))?.rank;

    let passed = failures.is_empty() && wp_rank == n_y;
    Ok(GridPointRecord {
        p: p.to_vec(),
        passed,
        roots_tested: roots.roots.iter().map(|z| [z.re, z.im]).collect(),
        zero_root_count: roots.zero_root_count,
        coprimeness_failures: failures,
        well_posedness_rank: Some(wp_rank),
        feedthrough_rank: None,
        error: None,
    })
}

// ---------------------------------------------------------------------------
// Reachability verdict.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReachabilityStatus {
    /// Some grid point satisfies the sufficient conditions.
    Yes,
    /// Constant-coefficient general-kind model failing the conditions; the
    /// frozen test is also necessary there.
    No,
    /// The sufficient conditions failed at every tested point; nothing is
    /// concluded for varying scheduling.
    NotEstablished,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReachabilityVerdict {
    pub structurally_reachable: ReachabilityStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_p: Option<Vec<f64>>,
    pub k_used: usize,
    pub grid_records: Vec<GridPointRecord>,
}

/// Dispatches the reachability test over a grid of frozen scheduling points.
pub fn check_reachability(
    r: &DirectRealization,
    grid: &[Vec<f64>],
    tol: &ToleranceConfig,
) -> Result<ReachabilityVerdict> {
    if grid.is_empty() {
        return Err(Error::Grid("reachability grid is empty".into()));
    }
    let model = r.model();
    let mut records = Vec::with_capacity(grid.len());
    let mut witness: Option<Vec<f64>> = None;

    match r.kind() {
        StructureKind::Fir => {
            // The state equation is scheduling-independent and its
            // reachability matrix tiles an identity: always reachable.
            return Ok(ReachabilityVerdict {
                structurally_reachable: ReachabilityStatus::Yes,
                witness_p: None,
                k_used: r.n_x(),
                grid_records: Vec::new(),
            });
        }
        StructureKind::InverseFir => {
            for p in grid {
                match r.feedthrough(p) {
                    Ok(b0) => {
                        let scale = 1.0 + max_abs(&b0);
                        let rank = numerical_rank(&b0, tol.data_policy(scale))?.rank;
                        let passed = rank == model.n_y();
                        if passed && witness.is_none() {
                            witness = Some(p.clone());
                        }
                        records.push(GridPointRecord {
                            p: p.clone(),
                            passed,
                            roots_tested: Vec::new(),
                            zero_root_count: 0,
                            coprimeness_failures: Vec::new(),
                            well_posedness_rank: None,
                            feedthrough_rank: Some(rank),
                            error: None,
                        });
                    }
                    Err(e) => records.push(GridPointRecord {
                        p: p.clone(),
                        passed: false,
                        roots_tested: Vec::new(),
                        zero_root_count: 0,
                        coprimeness_failures: Vec::new(),
                        well_posedness_rank: None,
                        feedthrough_rank: None,
                        error: Some(e.to_string()),
                    }),
                }
            }
        }
        StructureKind::General => {
            for p in grid {
                match frozen_reachability_conditions(r, p, tol) {
                    Ok(rec) => {
                        if rec.passed && witness.is_none() {
                            witness = Some(p.clone());
                        }
                        records.push(rec);
                    }
                    Err(e) => records.push(GridPointRecord {
                        p: p.clone(),
                        passed: false,
                        roots_tested: Vec::new(),
                        zero_root_count: 0,
                        coprimeness_failures: Vec::new(),
                        well_posedness_rank: None,
                        feedthrough_rank: None,
                        error: Some(e.to_string()),
                    }),
                }
            }
        }
    }

    let status = if witness.is_some() {
        ReachabilityStatus::Yes
    } else if r.kind() == StructureKind::General && model.is_constant() {
        // frozen conditions are also necessary for constant coefficients
        ReachabilityStatus::No
    } else {
        ReachabilityStatus::NotEstablished
    };
    Ok(ReachabilityVerdict {
        structurally_reachable: status,
        witness_p: witness,
        k_used: r.n_x(),
        grid_records: records,
    })
}

// ---------------------------------------------------------------------------
// Observability verdict.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ObservabilityClass {
    /// The realization cannot be observable (general kind, or wide FIR).
    No,
    /// Observable for at least one tested scheduling choice.
    Structurally,
    /// Observable for every tested scheduling choice.
    Completely,
    /// The sufficient conditions did not fire at any tested point.
    NotEstablished,
}

#[derive(Debug, Clone, Serialize)]
pub enum ReconstructibleIn {
    Steps(usize),
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    /// First scheduling point of the trial.
    pub initial_point: Vec<f64>,
    pub length: usize,
    pub rank: usize,
    /// Orthonormal kernel columns of the observability matrix.
    pub kernel_columns: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TrialRecord {
    /// Kernel basis as a matrix (ambient dimension `n_x`).
    pub fn kernel_matrix(&self, n_x: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n_x, self.kernel_columns.len());
        for (j, col) in self.kernel_columns.iter().enumerate() {
            m.set_column(j, &DVector::from_column_slice(col));
        }
        m
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ObservabilityVerdict {
    pub observable: ObservabilityClass,
    pub max_rank_found: usize,
    pub n_x: usize,
    pub trials: Vec<TrialRecord>,
    pub reconstructible_in: ReconstructibleIn,
}

/// Rank test of a single coefficient matrix at every point of every trial;
/// returns (all points pass, some point passes).
fn coefficient_rank_sweep(
    coeff_eval: impl Fn(&[f64]) -> Result<DMatrix<f64>>,
    required: usize,
    trials: &[SchedulingTrajectory],
    tol: &ToleranceConfig,
) -> Result<(bool, bool)> {
    let mut all = true;
    let mut some = false;
    for trial in trials {
        for p in trial.points() {
            match coeff_eval(p) {
                Ok(m) => {
                    let scale = 1.0 + max_abs(&m);
                    let rank = numerical_rank(&m, tol.data_policy(scale))?.rank;
                    if rank == required {
                        some = true;
                    } else {
                        all = false;
                    }
                }
                Err(_) => all = false,
            }
        }
    }
    Ok((all, some))
}

/// Observability check over sampled scheduling trials.
pub fn check_observability(
    r: &DirectRealization,
    trials: &[SchedulingTrajectory],
    tol: &ToleranceConfig,
) -> Result<ObservabilityVerdict> {
    if trials.is_empty() {
        return Err(Error::Trajectory("no observability trials supplied".into()));
    }
    let model = r.model();
    let steps_needed = model.n_a().max(model.n_b() - 1).max(1);
    for t in trials {
        if t.len() < steps_needed {
            return Err(Error::Trajectory(format!(
                "trial length {} is below max(n_a, n_b-1) = {steps_needed}",
                t.len()
            )));
        }
    }

    let mut records = Vec::with_capacity(trials.len());
    let mut max_rank = 0usize;
    for trial in trials {
        let record = observability_matrix(r, trial).and_then(|o_k| {
            let rank = numerical_rank(&o_k, tol.default_policy())?.rank;
            // the reduced form shares the kernel but is far better
            // conditioned, so the reported basis comes from it
            let obar = transformed_observability(r, trial)?.obar_k;
            let kernel = numerical_rank(&obar, tol.default_policy())?.kernel_basis;
            Ok((rank, kernel))
        });
        match record {
            Ok((rank, kernel)) => {
                max_rank = max_rank.max(rank);
                records.push(TrialRecord {
                    initial_point: trial.point(0).to_vec(),
                    length: trial.len(),
                    rank,
                    kernel_columns: (0..kernel.ncols())
                        .map(|j| kernel.column(j).iter().copied().collect())
                        .collect(),
                    error: None,
                });
            }
            Err(e) => records.push(TrialRecord {
                initial_point: trial.point(0).to_vec(),
                length: trial.len(),
                rank: 0,
                kernel_columns: Vec::new(),
                error: Some(e.to_string()),
            }),
        }
    }

    let class = match r.kind() {
        // the general-kind realization is never observable
        StructureKind::General => ObservabilityClass::No,
        StructureKind::InverseFir => {
            let n_a = model.n_a();
            let (all, some) = coefficient_rank_sweep(
                |p| model.a_coeffs()[n_a - 1].eval(p),
                model.n_y(),
                trials,
                tol,
            )?;
            if all {
                ObservabilityClass::Completely
            } else if some {
                ObservabilityClass::Structurally
            } else if model.is_constant() {
                // the rank condition is an exact iff, so a constant model
                // failing it everywhere is unobservable
                ObservabilityClass::No
            } else {
                ObservabilityClass::NotEstablished
            }
        }
        StructureKind::Fir => {
            if model.n_y() < model.n_u() {
                ObservabilityClass::No
            } else {
                let n_b = model.n_b();
                let (all, some) = coefficient_rank_sweep(
                    |p| model.b_coeffs()[n_b - 1].eval(p),
                    model.n_u(),
                    trials,
                    tol,
                )?;
                // sufficient only: a failure concludes nothing
                if all {
                    ObservabilityClass::Completely
                } else if some {
                    ObservabilityClass::Structurally
                } else {
                    ObservabilityClass::NotEstablished
                }
            }
        }
    };

    let recon = check_reconstructability(r, trials, tol)?;
    Ok(ObservabilityVerdict {
        observable: class,
        max_rank_found: max_rank,
        n_x: r.n_x(),
        trials: records,
        reconstructible_in: if recon.reconstructible {
            ReconstructibleIn::Steps(recon.steps)
        } else {
            ReconstructibleIn::Failed
        },
    })
}

// ---------------------------------------------------------------------------
// Reconstructability.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructabilityCheck {
    pub reconstructible: bool,
    pub steps: usize,
    /// Largest normalized residual `|prod F * K| / (1 + |prod F|)` over trials.
    pub max_residual: f64,
}

/// Number of steps after which unobservable directions must have decayed.
pub fn reconstructability_steps(r: &DirectRealization) -> usize {
    let m = r.model();
    match r.kind() {
        StructureKind::General => m.n_a().max(m.n_b() - 1),
        StructureKind::InverseFir => m.n_a(),
        StructureKind::Fir => m.n_b() - 1,
    }
}

/// Verifies that the kernel of the `steps`-horizon observability matrix is
/// annihilated by the state-transition product along every trial.
pub fn check_reconstructability(
    r: &DirectRealization,
    trials: &[SchedulingTrajectory],
    tol: &ToleranceConfig,
) -> Result<ReconstructabilityCheck> {
    let steps = reconstructability_steps(r);
    let mut max_residual = 0.0f64;
    for trial in trials {
        if trial.len() < steps.max(1) {
            return Err(Error::Trajectory(format!(
                "trial length {} is below the reconstruction horizon {steps}",
                trial.len()
            )));
        }
        let prefix = trial.truncated(steps.max(1))?;
        let o = observability_matrix(r, &prefix)?;
        let kernel = numerical_rank(&o, tol.default_policy())?.kernel_basis;
        // time-ordered product F(p_{steps-1}) ... F(p_0)
        let mut phi = DMatrix::<f64>::identity(r.n_x(), r.n_x());
        for j in 0..steps {
            let e = r.eval(prefix.point(j)).map_err(|err| err.at_step(j))?;
            phi = &e.f * &phi;
        }
        if kernel.ncols() > 0 {
            let residual = (&phi * &kernel).amax() / (1.0 + phi.amax());
            max_residual = max_residual.max(residual);
        }
    }
    Ok(ReconstructabilityCheck {
        reconstructible: max_residual < tol.reconstructability_tolerance,
        steps,
        max_residual,
    })
}

// ---------------------------------------------------------------------------
// Frozen-scheduling Kalman decomposition.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct FrozenKalmanDecomposition {
    pub p: Vec<f64>,
    /// Rank of `O_{n_x} R_{n_x}`: dimension of the reachable-and-observable part.
    pub minimal_order: usize,
    pub reachable_dim: usize,
    pub observable_dim: usize,
    /// Orthonormal basis of the orthogonal complement of the reachable image.
    pub unreachable_basis: DMatrix<f64>,
    /// Orthonormal basis of the unobservable kernel.
    pub unobservable_basis: DMatrix<f64>,
}

/// Kalman-style dimensions of the frozen realization at `p`.
pub fn frozen_kalman_decomposition(
    r: &DirectRealization,
    p: &[f64],
    tol: &ToleranceConfig,
) -> Result<FrozenKalmanDecomposition> {
    let traj = SchedulingTrajectory::constant(p, r.n_x().max(1))?;
    let rm = reachability_matrix(r, &traj)?;
    let om = observability_matrix(r, &traj)?;
    let policy = tol.frozen_policy();
    let reach = numerical_rank(&rm, policy)?;
    let obs = numerical_rank(&om, policy)?;
    let product = numerical_rank(&(&om * &rm), policy)?;
    let unreachable = numerical_rank(&rm.transpose(), policy)?.kernel_basis;
    Ok(FrozenKalmanDecomposition {
        p: p.to_vec(),
        minimal_order: product.rank,
        reachable_dim: reach.rank,
        observable_dim: obs.rank,
        unreachable_basis: unreachable,
        unobservable_basis: obs.kernel_basis,
    })
}

// ---------------------------------------------------------------------------
// Aggregate analysis.
// ---------------------------------------------------------------------------

/// Analysis configuration; defaults follow the CLI.
#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    /// Bounded grid box, one interval per scheduling dimension.
    pub grid_box: Vec<(f64, f64)>,
    pub grid_points_per_dim: usize,
    /// Observability horizon; `None` selects `n_x`.
    pub horizon: Option<usize>,
    /// Number of random scheduling trials added to the constant ones.
    pub trial_count: usize,
    pub seed: u64,
    pub tolerances: ToleranceConfig,
}

impl AnalysisConfig {
    pub fn over_box(grid_box: Vec<(f64, f64)>) -> Self {
        AnalysisConfig {
            grid_box,
            grid_points_per_dim: 101,
            horizon: None,
            trial_count: 10,
            seed: 0,
            tolerances: ToleranceConfig::default(),
        }
    }
}

/// Cartesian grid over the box, `per_dim` points per dimension.
pub fn grid_points(grid_box: &[(f64, f64)], per_dim: usize) -> Result<Vec<Vec<f64>>> {
    if grid_box.is_empty() || per_dim == 0 {
        return Err(Error::Grid("grid box and resolution must be nonempty".into()));
    }
    for &(lo, hi) in grid_box {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::Grid(format!(
                "grid interval [{lo}, {hi}] must be bounded and ordered"
            )));
        }
    }
    let total: usize = per_dim.pow(grid_box.len() as u32);
    if total > 1_000_000 {
        return Err(Error::Grid(format!("grid of {total} points is too large")));
    }
    let axes: Vec<Vec<f64>> = grid_box
        .iter()
        .map(|&(lo, hi)| {
            if per_dim == 1 {
                vec![0.5 * (lo + hi)]
            } else {
                (0..per_dim)
                    .map(|i| {
                        if i + 1 == per_dim {
                            hi
                        } else {
                            lo + (hi - lo) * i as f64 / (per_dim - 1) as f64
                        }
                    })
                    .collect()
            }
        })
        .collect();
    let mut pts: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(pts.len() * axis.len());
        for p in &pts {
            for &x in axis {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        pts = next;
    }
    Ok(pts)
}

/// Constant trajectories at the grid points plus uniformly random ones.
pub fn default_trials(
    grid: &[Vec<f64>],
    grid_box: &[(f64, f64)],
    len: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<SchedulingTrajectory>> {
    let mut trials = Vec::with_capacity(grid.len() + count);
    for p in grid {
        trials.push(SchedulingTrajectory::constant(p, len)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let points = (0..len)
            .map(|_| {
                grid_box
                    .iter()
                    .map(|&(lo, hi)| if lo == hi { lo } else { rng.gen_range(lo..hi) })
                    .collect()
            })
            .collect();
        trials.push(SchedulingTrajectory::new(points)?);
    }
    Ok(trials)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelSummary {
    pub n_y: usize,
    pub n_u: usize,
    pub n_p: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub kind: StructureKind,
    pub n_x: usize,
    pub constant_coefficients: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub grid_box: Vec<[f64; 2]>,
    pub grid_points_per_dim: usize,
    pub horizon: usize,
    pub trial_count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrozenPointRecord {
    pub p: Vec<f64>,
    pub minimal_order: usize,
    pub reachable_dim: usize,
    pub observable_dim: usize,
    pub stability: LyapunovStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Self-contained analysis report; serializable, embeds its configuration.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub model: ModelSummary,
    pub config: ResolvedConfig,
    pub tolerances: ToleranceConfig,
    pub reachability: ReachabilityVerdict,
    pub observability: ObservabilityVerdict,
    pub reconstructability: ReconstructabilityCheck,
    pub frozen: Vec<FrozenPointRecord>,
}

/// Runs every structural check and aggregates them into one report.
pub fn analyze(model: &LpvIoModel, config: &AnalysisConfig) -> Result<AnalysisReport> {
    if config.grid_box.len() != model.n_p() {
        return Err(Error::Grid(format!(
            "grid box has {} dimensions, model has n_p = {}",
            config.grid_box.len(),
            model.n_p()
        )));
    }
    for (i, &(lo, hi)) in config.grid_box.iter().enumerate() {
        let iv = model.domain()[i];
        if lo < iv.lo || hi > iv.hi {
            return Err(Error::Grid(format!(
                "grid interval [{lo}, {hi}] leaves the model domain [{}, {}]",
                iv.lo, iv.hi
            )));
        }
    }
    let r = build_direct(model)?;
    let tol = &config.tolerances;
    let grid = grid_points(&config.grid_box, config.grid_points_per_dim)?;

    let reachability = check_reachability(&r, &grid, tol)?;

    let horizon = config.horizon.unwrap_or(r.n_x());
    let trial_len = horizon
        .max(model.n_a().max(model.n_b() - 1))
        .max(1);
    let trials = default_trials(&grid, &config.grid_box, trial_len, config.trial_count, config.seed)?;
    let observability = check_observability(&r, &trials, tol)?;
    let reconstructability = check_reconstructability(&r, &trials, tol)?;

    let mut frozen = Vec::with_capacity(grid.len());
    for p in &grid {
        let entry = (|| -> Result<FrozenPointRecord> {
            let kd = frozen_kalman_decomposition(&r, p, tol)?;
            let e = r.eval(p)?;
            let q = DMatrix::<f64>::identity(r.n_x(), r.n_x());
            let stab = solve_discrete_lyapunov(&e.f, &q)?;
            Ok(FrozenPointRecord {
                p: p.clone(),
                minimal_order: kd.minimal_order,
                reachable_dim: kd.reachable_dim,
                observable_dim: kd.observable_dim,
                stability: stab.status,
                error: None,
            })
        })();
        match entry {
            Ok(rec) => frozen.push(rec),
            Err(e) => frozen.push(FrozenPointRecord {
                p: p.clone(),
                minimal_order: 0,
                reachable_dim: 0,
                observable_dim: 0,
                stability: LyapunovStatus::Marginal,
                error: Some(e.to_string()),
            }),
        }
    }

    Ok(AnalysisReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        model: ModelSummary {
            n_y: model.n_y(),
            n_u: model.n_u(),
            n_p: model.n_p(),
            n_a: model.n_a(),
            n_b: model.n_b(),
            kind: r.kind(),
            n_x: r.n_x(),
            constant_coefficients: model.is_constant(),
        },
        config: ResolvedConfig {
            grid_box: config.grid_box.iter().map(|&(lo, hi)| [lo, hi]).collect(),
            grid_points_per_dim: config.grid_points_per_dim,
            horizon,
            trial_count: config.trial_count,
            seed: config.seed,
        },
        tolerances: tol.clone(),
        reachability,
        observability,
        reconstructability,
        frozen,
    })
}
