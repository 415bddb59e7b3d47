//! Numerical kernel: SVD-based rank and nullspace decisions, eigenvalues of
//! monic matrix polynomials via block companion linearization, discrete
//! Lyapunov solving and subspace comparison.
//!
//! Every decision records the tolerance it used so reports stay auditable.

use crate::error::{Error, Result};
use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

/// Default relative rank epsilon: 10^3 times machine precision. The rank
/// tolerance is `epsilon * max(rows, cols) * sigma_max`.
pub const DEFAULT_RANK_EPSILON: f64 = 1e3 * f64::EPSILON;

/// Roots with `|sigma| < ZERO_ROOT_THRESHOLD * (1 + max |sigma_j|)` are
/// deflated from the coprimeness sweep.
pub const ZERO_ROOT_THRESHOLD: f64 = 1e-10;

/// Clustering radius used only when reporting repeated roots.
pub const ROOT_CLUSTER_TOLERANCE: f64 = 1e-6;

/// Relative eigenvalue thresholds for the Lyapunov positive-definiteness and
/// singularity decisions.
pub const LYAPUNOV_PD_TOLERANCE: f64 = 1e-10;
pub const LYAPUNOV_SINGULAR_TOLERANCE: f64 = 1e-10;

/// Default largest-principal-angle threshold for subspace equality (radians).
pub const SUBSPACE_ANGLE_TOLERANCE: f64 = 1e-8;


/// Iteration cap for SVD and Schur computations; exceeding it surfaces an
/// explicit error instead of cycling.
pub const MAX_DECOMPOSITION_ITERATIONS: usize = 100_000;

fn try_svd<S>(
    m: DMatrix<S>,
    compute_u: bool,
    compute_v: bool,
) -> Result<nalgebra::linalg::SVD<S, nalgebra::Dyn, nalgebra::Dyn>>
where
    S: ComplexField<RealField = f64>,
{
    let n = m.nrows().max(m.ncols());
    m.try_svd(compute_u, compute_v, f64::EPSILON, MAX_DECOMPOSITION_ITERATIONS)
        .ok_or(Error::EigenFailure(n))
}

/// Tolerance policy for numerical rank decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TolerancePolicy {
    /// `tol = epsilon * max(rows, cols) * sigma_max`.
    Relative(f64),
    /// Fixed threshold in singular-value units.
    Absolute(f64),
    /// Relative rule with an absolute floor:
    /// `tol = max(epsilon * max(rows, cols) * sigma_max, floor)`.
    RelativeWithFloor { epsilon: f64, floor: f64 },
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy::Relative(DEFAULT_RANK_EPSILON)
    }
}

impl TolerancePolicy {
    fn tolerance(&self, sigma_max: f64, max_dim: usize) -> f64 {
        match *self {
            TolerancePolicy::Relative(eps) => eps * max_dim as f64 * sigma_max,
            TolerancePolicy::Absolute(tau) => tau,
            TolerancePolicy::RelativeWithFloor { epsilon, floor } => {
                (epsilon * max_dim as f64 * sigma_max).max(floor)
            }
        }
    }
}

/// Outcome of a numerical rank decision.
#[derive(Debug, Clone)]
pub struct RankResult<S = f64> {
    pub rank: usize,
    /// Singular values in descending order (all `min(rows, cols)` of them).
    pub singular_values: Vec<f64>,
    pub tolerance_used: f64,
    /// Orthonormal columns spanning the numerical kernel.
    pub kernel_basis: DMatrix<S>,
    pub row_space_dim: usize,
}

fn rank_core<S>(m: &DMatrix<S>, policy: TolerancePolicy) -> Result<RankResult<S>>
where
    S: ComplexField<RealField = f64> + Copy,
{
    if m.iter().any(|x| !x.norm1().is_finite()) {
        return Err(Error::NonFiniteMatrix);
    }
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(RankResult {
            rank: 0,
            singular_values: Vec::new(),
            tolerance_used: 0.0,
            kernel_basis: DMatrix::identity(cols, cols),
            row_space_dim: 0,
        });
    }
    // Pad with zero rows so the thin SVD carries all `cols` right singular
    // vectors; the kernel needs the trailing ones even for wide inputs.
    let eff_rows = rows.max(cols);
    let work = if eff_rows == rows {
        m.clone()
    } else {
        let mut w = DMatrix::zeros(eff_rows, cols);
        w.view_mut((0, 0), (rows, cols)).copy_from(m);
        w
    };
    let svd = try_svd(work, false, true)?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let tol = policy.tolerance(sigma_max, rows.max(cols));
    let rank = sv.iter().take_while(|&&s| s > tol).count();

    // nalgebra does not guarantee ordered singular values; align V rows with
    // the sorted order by index.
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
    });
    let v_t = svd.v_t.expect("requested V^T");
    let mut kernel = DMatrix::<S>::zeros(cols, cols - rank);
    for (k, &idx) in order.iter().enumerate().skip(rank) {
        let row = v_t.row(idx).adjoint();
        kernel.set_column(k - rank, &row);
    }
    let n_keep = sv.len().min(rows.min(cols).max(rank));
    sv.truncate(n_keep);
    Ok(RankResult {
        rank,
        singular_values: sv,
        tolerance_used: tol,
        kernel_basis: kernel,
        row_space_dim: rank,
    })
}

/// Numerical rank and kernel of a real matrix.
pub fn numerical_rank(m: &DMatrix<f64>, policy: TolerancePolicy) -> Result<RankResult<f64>> {
    rank_core(m, policy)
}

/// Numerical rank and kernel of a complex matrix.
pub fn numerical_rank_complex(
    m: &DMatrix<Complex64>,
    policy: TolerancePolicy,
) -> Result<RankResult<Complex64>> {
    rank_core(m, policy)
}

/// Eigenvalues of a monic matrix polynomial, multiplicity-aware.
#[derive(Debug, Clone)]
pub struct RootSet {
    /// Nonzero roots, one entry per instance (the coprimeness sweep list).
    pub roots: Vec<Complex64>,
    /// Count of deflated roots with `|sigma|` below the zero threshold.
    pub zero_root_count: usize,
}

impl RootSet {
    /// Clusters roots within `ROOT_CLUSTER_TOLERANCE` for display; the sweep
    /// itself always tests every instance.
    pub fn clustered(&self) -> Vec<(Complex64, usize)> {
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        for &r in &self.roots {
            match clusters
                .iter_mut()
                .find(|(c, _)| (c - r).norm() < ROOT_CLUSTER_TOLERANCE)
            {
                Some((_, count)) => *count += 1,
                None => clusters.push((r, 1)),
            }
        }
        clusters
    }
}

/// Roots of the monic matrix polynomial
/// `sigma^d I + sigma^{d-1} C_{d-1} + ... + sigma C_1 + C_0`
/// where `coeffs[j]` multiplies `sigma^j` (ascending powers, degree
/// `d = coeffs.len()`), via eigenvalues of the block companion matrix.
pub fn matrix_poly_roots(coeffs: &[DMatrix<f64>]) -> Result<RootSet> {
    let d = coeffs.len();
    if d == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            zero_root_count: 0,
        });
    }
    let m = coeffs[0].nrows();
    for c in coeffs {
        if c.nrows() != m || c.ncols() != m {
            return Err(Error::DimensionMismatch(
                "matrix polynomial coefficients must be square and equally sized".into(),
            ));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteMatrix);
        }
    }
    let n = m * d;
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for (j, c) in coeffs.iter().enumerate() {
        // coeffs[j] multiplies sigma^j and sits in block column d-1-j.
        companion
            .view_mut((0, (d - 1 - j) * m), (m, m))
            .copy_from(&(-c));
    }
    if d > 1 {
        companion
            .view_mut((m, 0), (n - m, n - m))
            .fill_diagonal(1.0);
    }
    let schur = nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, 100_000)
        .ok_or(Error::EigenFailure(n))?;
    let eig = schur.complex_eigenvalues();
    let all: Vec<Complex64> = eig.iter().copied().collect();
    let max_mag = all.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let zero_tol = ZERO_ROOT_THRESHOLD * (1.0 + max_mag);
    let (zeros, nonzero): (Vec<_>, Vec<_>) = all.into_iter().partition(|z| z.norm() < zero_tol);
    Ok(RootSet {
        roots: nonzero,
        zero_root_count: zeros.len(),
    })
}

/// Stability verdict of the frozen Lyapunov test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum LyapunovStatus {
    /// A positive definite solution exists: Schur stable at the point.
    Stable,
    /// The solution exists but is not positive definite.
    Unstable,
    /// The Lyapunov operator is singular (some eigenvalue product
    /// `lambda_i * lambda_j = 1`); the test is indeterminate.
    Marginal,
}

#[derive(Debug, Clone)]
pub struct LyapunovResult {
    pub status: LyapunovStatus,
    /// The symmetric solution, when the operator was nonsingular.
    pub solution: Option<DMatrix<f64>>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Solves `F' P F - P = -Q` by vectorization and classifies stability of `F`
/// at the frozen point. `Q` must be symmetric positive definite.
pub fn solve_discrete_lyapunov(f: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<LyapunovResult> {
    let n = f.nrows();
    if f.ncols() != n || q.nrows() != n || q.ncols() != n {
        return Err(Error::DimensionMismatch(
            "Lyapunov solve needs square F and Q of equal size".into(),
        ));
    }
    if f.iter().chain(q.iter()).any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteMatrix);
    }
    // vec(F' P F) = (F' (x) F') vec(P)
    let ft = f.transpose();
    let op = ft.kronecker(&ft) - DMatrix::<f64>::identity(n * n, n * n);
    let svd = try_svd(op, true, true)?;
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= LYAPUNOV_SINGULAR_TOLERANCE * smax {
        return Ok(LyapunovResult {
            status: LyapunovStatus::Marginal,
            solution: None,
            min_eigenvalue: f64::NAN,
            max_eigenvalue: f64::NAN,
        });
    }
    let rhs = DVector::from_iterator(n * n, q.iter().map(|&x| -x));
    let vec_p = svd
        .solve(&rhs, 0.0)
        .map_err(|_| Error::EigenFailure(n * n))?;
    let p = DMatrix::from_iterator(n, n, vec_p.iter().copied());
    let p = (&p + p.transpose()) * 0.5;
    let eigs = p.clone().symmetric_eigen().eigenvalues;
    let min_eig = eigs.min();
    let max_eig = eigs.max();
    let status = if max_eig > 0.0 && min_eig > LYAPUNOV_PD_TOLERANCE * max_eig {
        LyapunovStatus::Stable
    } else {
        LyapunovStatus::Unstable
    };
    Ok(LyapunovResult {
        status,
        solution: Some(p),
        min_eigenvalue: min_eig,
        max_eigenvalue: max_eig,
    })
}

/// Result of comparing two subspaces by principal angles.
#[derive(Debug, Clone)]
pub struct SubspaceComparison {
    pub equal: bool,
    /// Principal angles in ascending order (radians).
    pub principal_angles: Vec<f64>,
    pub dim_left: usize,
    pub dim_right: usize,
}

fn orthonormal_basis(b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if b.ncols() == 0 {
        return Ok(b.clone());
    }
    let svd = try_svd(b.clone(), true, false)?;
    let rank = {
        let smax = svd.singular_values.max();
        let tol = DEFAULT_RANK_EPSILON * b.nrows().max(b.ncols()) as f64 * smax;
        svd.singular_values.iter().filter(|&&s| s > tol).count()
    };
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
    });
    let mut q = DMatrix::zeros(b.nrows(), rank);
    for (k, &idx) in order.iter().take(rank).enumerate() {
        q.set_column(k, &u.column(idx));
    }
    Ok(q)
}

/// Orthonormal basis of the column space (image), with rank decided by the
/// given policy.
pub fn column_space_basis(
    m: &DMatrix<f64>,
    policy: TolerancePolicy,
) -> Result<DMatrix<f64>> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteMatrix);
    }
    if m.ncols() == 0 || m.nrows() == 0 {
        return Ok(DMatrix::zeros(m.nrows(), 0));
    }
    let svd = try_svd(m.clone(), true, false)?;
    let smax = svd.singular_values.max();
    let tol = policy.tolerance(smax, m.nrows().max(m.ncols()));
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
    });
    let rank = order
        .iter()
        .take_while(|&&i| svd.singular_values[i] > tol)
        .count();
    let mut q = DMatrix::zeros(m.nrows(), rank);
    for (k, &idx) in order.iter().take(rank).enumerate() {
        q.set_column(k, &u.column(idx));
    }
    Ok(q)
}

/// True iff the two spans coincide: equal dimensions and largest principal
/// angle below `tol` radians.
pub fn subspace_equal(
    basis_left: &DMatrix<f64>,
    basis_right: &DMatrix<f64>,
    tol: f64,
) -> Result<SubspaceComparison> {
    if basis_left.nrows() != basis_right.nrows() {
        return Err(Error::DimensionMismatch(
            "subspace bases must share the ambient dimension".into(),
        ));
    }
    let ql = orthonormal_basis(basis_left)?;
    let qr = orthonormal_basis(basis_right)?;
    let (dl, dr) = (ql.ncols(), qr.ncols());
    if dl == 0 && dr == 0 {
        return Ok(SubspaceComparison {
            equal: true,
            principal_angles: Vec::new(),
            dim_left: 0,
            dim_right: 0,
        });
    }
    if dl == 0 || dr == 0 {
        return Ok(SubspaceComparison {
            equal: false,
            principal_angles: Vec::new(),
            dim_left: dl,
            dim_right: dr,
        });
    }
    let cross = ql.transpose() * &qr;
    let svd = try_svd(cross, false, false)?;
    let mut cosines: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|&s| s.clamp(-1.0, 1.0))
        .collect();
    cosines.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // acos cannot resolve angles below sqrt(eps); recompute small angles
    // from the sine form sigma((I - Q_l Q_l') Q_r) (Bjorck-Golub).
    let residual = &qr - &ql * (ql.transpose() * &qr);
    let mut sines: Vec<f64> = try_svd(residual, false, false)?
        .singular_values
        .iter()
        .map(|&s| s.clamp(-1.0, 1.0))
        .collect();
    sines.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut angles: Vec<f64> = cosines
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if c * c > 0.5 && i < sines.len() {
                sines[i].asin()
            } else {
                c.acos()
            }
        })
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let largest = angles.last().copied().unwrap_or(0.0);
    Ok(SubspaceComparison {
        equal: dl == dr && largest < tol,
        principal_angles: angles,
        dim_left: dl,
        dim_right: dr,
    })
}
