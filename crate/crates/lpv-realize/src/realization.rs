//! Direct nonminimal state-space realization of an LPV-IO model.
//!
//! The state stacks lagged outputs and inputs verbatim,
//! `x_k = [y_{k-1}; ...; y_{k-n_a}; u_{k-1}; ...; u_{k-n_b+1}]`, so the
//! realization is written directly in the model's coefficient functions:
//!
//! ```text
//! x_{k+1} = F(p_k) x_k + G(p_k) u_k
//! y_k     = H(p_k) x_k + J(p_k) u_k
//! ```
//!
//! with `H(p) = [-A_1(p) .. -A_{n_a}(p) | B_1(p) .. B_{n_b-1}(p)]`,
//! `J(p) = B_0(p)`, and `F(p) = F + G H(p)` for constant 0/1 shift blocks
//! `F = blkdiag(F_a, F_b)`, `G = [G_a; 0]`. When `n_a = 0` the model is an
//! FIR filter and the output-lag blocks are empty; when `n_b = 1` it is an
//! inverse FIR filter and the input-lag blocks are empty. Empty blocks are
//! genuine 0-sized matrices, which keeps every formula branch-free.

use crate::error::{Error, Result};
use crate::model::LpvIoModel;
use nalgebra::DMatrix;
use serde::Serialize;

/// Which structural special case the orders select.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StructureKind {
    /// `n_a > 0` and `n_b > 1`.
    General,
    /// `n_a = 0`: finite impulse response; the state equation is constant.
    Fir,
    /// `n_b = 1`: inverse FIR filter; no lagged inputs enter the state.
    InverseFir,
}

impl StructureKind {
    /// Determined solely by the orders.
    pub fn from_orders(n_a: usize, n_b: usize) -> Result<Self> {
        match (n_a, n_b) {
            (0, 0) | (0, 1) => Err(Error::DegenerateOrders),
            (0, _) => Ok(StructureKind::Fir),
            (_, 1) => Ok(StructureKind::InverseFir),
            _ => Ok(StructureKind::General),
        }
    }
}

/// Constant 0/1 shift blocks of the realization.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralMatrices {
    /// `n_y n_a` square down-shift over the output lags.
    pub f_a: DMatrix<f64>,
    /// Injects `y_k` at the top of the output-lag stack (`n_y n_a x n_y`).
    pub g_a: DMatrix<f64>,
    /// `n_u (n_b-1)` square down-shift over the input lags.
    pub f_b: DMatrix<f64>,
    /// Injects `u_k` at the top of the input-lag stack (`n_u (n_b-1) x n_u`).
    pub g_b: DMatrix<f64>,
    /// `blkdiag(F_a, F_b)`.
    pub f: DMatrix<f64>,
    /// `[G_a; 0]`, the factor in the identity `F(p) = F + G H(p)`.
    pub g: DMatrix<f64>,
}

fn shift_block(block: usize, count: usize) -> DMatrix<f64> {
    // count x count blocks of size `block`, identity on the subdiagonal
    let n = block * count;
    let mut m = DMatrix::zeros(n, n);
    if count > 1 {
        m.view_mut((block, 0), (n - block, n - block))
            .fill_diagonal(1.0);
    }
    m
}

fn inject_block(block: usize, count: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(block * count, block);
    if count > 0 {
        m.view_mut((0, 0), (block, block)).fill_diagonal(1.0);
    }
    m
}

/// Builds the exact 0/1 shift blocks for the given orders. The blocks are
/// nilpotent: `F_a^{n_a} = 0`, `F_b^{n_b-1} = 0`, and
/// `F^{max(n_a, n_b-1)} = 0` exactly.
pub fn structural_matrices(n_y: usize, n_u: usize, n_a: usize, n_b: usize) -> StructuralMatrices {
    let f_a = shift_block(n_y, n_a);
    let g_a = inject_block(n_y, n_a);
    let f_b = shift_block(n_u, n_b.saturating_sub(1));
    let g_b = inject_block(n_u, n_b.saturating_sub(1));
    let na_dim = n_y * n_a;
    let nb_dim = n_u * n_b.saturating_sub(1);
    let n_x = na_dim + nb_dim;
    let mut f = DMatrix::zeros(n_x, n_x);
    f.view_mut((0, 0), (na_dim, na_dim)).copy_from(&f_a);
    f.view_mut((na_dim, na_dim), (nb_dim, nb_dim)).copy_from(&f_b);
    let mut g = DMatrix::zeros(n_x, n_y);
    g.view_mut((0, 0), (na_dim, n_y)).copy_from(&g_a);
    StructuralMatrices {
        f_a,
        g_a,
        f_b,
        g_b,
        f,
        g,
    }
}

/// The realization matrices evaluated at one scheduling point.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatricesAtPoint {
    pub point: Vec<f64>,
    /// `n_x x n_x` state transition.
    pub f: DMatrix<f64>,
    /// `n_x x n_u` input map.
    pub g: DMatrix<f64>,
    /// `n_y x n_x` output map.
    pub h: DMatrix<f64>,
    /// `n_y x n_u` feedthrough.
    pub j: DMatrix<f64>,
}

/// Direct nonminimal realization of an LPV-IO model.
#[derive(Debug, Clone)]
pub struct DirectRealization {
    model: LpvIoModel,
    kind: StructureKind,
    n_x: usize,
    structural: StructuralMatrices,
}

/// Builds the direct realization; fails only on degenerate orders.
pub fn build_direct(model: &LpvIoModel) -> Result<DirectRealization> {
    let kind = StructureKind::from_orders(model.n_a(), model.n_b())?;
    let n_x = model.n_y() * model.n_a() + model.n_u() * (model.n_b() - 1);
    let structural = structural_matrices(model.n_y(), model.n_u(), model.n_a(), model.n_b());
    Ok(DirectRealization {
        model: model.clone(),
        kind,
        n_x,
        structural,
    })
}

impl DirectRealization {
    pub fn model(&self) -> &LpvIoModel {
        &self.model
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_u(&self) -> usize {
        self.model.n_u()
    }

    pub fn n_y(&self) -> usize {
        self.model.n_y()
    }

    pub fn structural(&self) -> &StructuralMatrices {
        &self.structural
    }

    /// Stacked `A(p) = [A_1(p) .. A_{n_a}(p)]`, `n_y x n_y n_a`.
    pub fn stacked_a(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let n_y = self.model.n_y();
        let mut a = DMatrix::zeros(n_y, n_y * self.model.n_a());
        for (i, coeff) in self.model.a_coeffs().iter().enumerate() {
            a.view_mut((0, i * n_y), (n_y, n_y)).copy_from(&coeff.eval(p)?);
        }
        Ok(a)
    }

    /// Stacked `B(p) = [B_1(p) .. B_{n_b-1}(p)]`, `n_y x n_u (n_b-1)`.
    pub fn stacked_b(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let (n_y, n_u) = (self.model.n_y(), self.model.n_u());
        let mut b = DMatrix::zeros(n_y, n_u * (self.model.n_b() - 1));
        for (i, coeff) in self.model.b_coeffs().iter().enumerate().skip(1) {
            b.view_mut((0, (i - 1) * n_u), (n_y, n_u))
                .copy_from(&coeff.eval(p)?);
        }
        Ok(b)
    }

    /// Feedthrough `B_0(p)`.
    pub fn feedthrough(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        self.model.b_coeffs()[0].eval(p)
    }

    /// Evaluates all four system matrices at `p`.
    pub fn eval(&self, p: &[f64]) -> Result<SystemMatricesAtPoint> {
        if !self.model.contains(p) {
            return Err(Error::OutsideDomain { point: p.to_vec() });
        }
        let a = self.stacked_a(p)?;
        let b = self.stacked_b(p)?;
        let b0 = self.feedthrough(p)?;
        let n_y = self.model.n_y();
        let n_u = self.model.n_u();
        let mut h = DMatrix::zeros(n_y, self.n_x);
        h.view_mut((0, 0), (n_y, a.ncols())).copy_from(&(-&a));
        h.view_mut((0, a.ncols()), (n_y, b.ncols())).copy_from(&b);
        // F(p) = F + G H(p); the identity holds exactly by construction.
        let f = &self.structural.f + &self.structural.g * &h;
        let ga_b0 = &self.structural.g_a * &b0;
        let mut g = DMatrix::zeros(self.n_x, n_u);
        g.view_mut((0, 0), (ga_b0.nrows(), n_u)).copy_from(&ga_b0);
        g.view_mut((ga_b0.nrows(), 0), (self.structural.g_b.nrows(), n_u))
            .copy_from(&self.structural.g_b);
        Ok(SystemMatricesAtPoint {
            point: p.to_vec(),
            f,
            g,
            h,
            j: b0,
        })
    }
}
