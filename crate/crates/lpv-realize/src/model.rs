//! LPV input-output models with Laurent-rational coefficient functions.
//!
//! A model is the difference equation
//!
//! ```text
//! y_k = -sum_{i=1..n_a} A_i(p_k) y_{k-i} + sum_{i=0..n_b-1} B_i(p_k) u_{k-i}
//! ```
//!
//! where every entry of `A_i`, `B_i` is a Laurent-rational function of the
//! scheduling point `p`: a sum of monomials with integer (possibly negative)
//! exponents over a second such sum. The scheduling domain is a closed
//! interval box, with infinite bounds allowed.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Guard threshold: a denominator with `|den| < GUARD * max(1, |num|)` is
/// flagged by `validate` as a near-singularity diagnostic.
pub const DENOMINATOR_GUARD: f64 = 1e-12;

/// One monomial `coef * p_1^{e_1} * ... * p_{n_p}^{e_{n_p}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub exponents: Vec<i32>,
}

impl Term {
    pub fn new(coef: f64, exponents: Vec<i32>) -> Self {
        Term { coef, exponents }
    }

    fn eval(&self, p: &[f64]) -> f64 {
        let mut v = self.coef;
        for (x, &e) in p.iter().zip(&self.exponents) {
            if e != 0 {
                v *= x.powi(e);
            }
        }
        v
    }

    fn is_constant(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

/// A scalar Laurent-rational function of the scheduling variable.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentRational {
    numerator: Vec<Term>,
    denominator: Vec<Term>,
}

impl LaurentRational {
    /// Builds a rational from numerator and denominator term lists.
    ///
    /// The denominator must contain at least one term with a nonzero
    /// coefficient; passing an empty list selects the constant 1.
    pub fn new(numerator: Vec<Term>, denominator: Vec<Term>, n_p: usize) -> Result<Self> {
        for t in numerator.iter().chain(denominator.iter()) {
            if t.exponents.len() != n_p {
                return Err(Error::MalformedTerm(format!(
                    "exponent vector has length {}, expected n_p = {}",
                    t.exponents.len(),
                    n_p
                )));
            }
            if !t.coef.is_finite() {
                return Err(Error::MalformedTerm(format!(
                    "coefficient {} is not finite",
                    t.coef
                )));
            }
        }
        let denominator = if denominator.is_empty() {
            vec![Term::new(1.0, vec![0; n_p])]
        } else {
            denominator
        };
        if denominator.iter().all(|t| t.coef == 0.0) {
            return Err(Error::ZeroDenominator {
                entry: "rational".into(),
            });
        }
        Ok(LaurentRational {
            numerator,
            denominator,
        })
    }

    /// The constant function `c`.
    pub fn constant(c: f64, n_p: usize) -> Self {
        LaurentRational {
            numerator: vec![Term::new(c, vec![0; n_p])],
            denominator: vec![Term::new(1.0, vec![0; n_p])],
        }
    }

    /// A single monomial `c * p^e` (multi-index exponent).
    pub fn monomial(c: f64, exponents: Vec<i32>) -> Self {
        let n_p = exponents.len();
        LaurentRational {
            numerator: vec![Term::new(c, exponents)],
            denominator: vec![Term::new(1.0, vec![0; n_p])],
        }
    }

    pub fn numerator(&self) -> &[Term] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Term] {
        &self.denominator
    }

    /// True when both sides are free of the scheduling variable.
    pub fn is_constant(&self) -> bool {
        self.numerator.iter().all(Term::is_constant)
            && self.denominator.iter().all(Term::is_constant)
    }

    /// True when the denominator is the literal constant 1.
    pub fn has_unit_denominator(&self) -> bool {
        self.denominator.len() == 1
            && self.denominator[0].coef == 1.0
            && self.denominator[0].is_constant()
    }

    /// The constant value, if `is_constant` holds.
    pub fn constant_value(&self) -> Option<f64> {
        if self.is_constant() {
            let num: f64 = self.numerator.iter().map(|t| t.coef).sum();
            let den: f64 = self.denominator.iter().map(|t| t.coef).sum();
            Some(num / den)
        } else {
            None
        }
    }

    /// Evaluates numerator and denominator separately.
    pub fn eval_parts(&self, p: &[f64]) -> (f64, f64) {
        let num = self.numerator.iter().map(|t| t.eval(p)).sum();
        let den = self.denominator.iter().map(|t| t.eval(p)).sum();
        (num, den)
    }

    /// Evaluates the rational at `p`. A vanishing denominator or a
    /// non-finite result is a hard error, never a silent NaN.
    pub fn eval(&self, p: &[f64]) -> Result<f64> {
        let (num, den) = self.eval_parts(p);
        if den == 0.0 {
            return Err(Error::DenominatorZeroAt {
                entry: "rational".into(),
                point: p.to_vec(),
            });
        }
        let v = num / den;
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                entry: "rational".into(),
                point: p.to_vec(),
            });
        }
        Ok(v)
    }
}

/// Matrix of Laurent-rational entries, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentRational>,
}

impl CoefficientMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix declared {rows}x{cols} but has {} entries",
                entries.len()
            )));
        }
        Ok(CoefficientMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// A matrix of constants taken row-major from `values`.
    pub fn constant(rows: usize, cols: usize, values: &[f64], n_p: usize) -> Result<Self> {
        let entries = values
            .iter()
            .map(|&v| LaurentRational::constant(v, n_p))
            .collect();
        CoefficientMatrix::new(rows, cols, entries)
    }

    pub fn zeros(rows: usize, cols: usize, n_p: usize) -> Self {
        CoefficientMatrix {
            rows,
            cols,
            entries: vec![LaurentRational::constant(0.0, n_p); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &LaurentRational {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[LaurentRational] {
        &self.entries
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(LaurentRational::is_constant)
    }

    /// Entrywise evaluation at `p`.
    pub fn eval(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self.entry(r, c).eval(p).map_err(|e| match e {
                    Error::DenominatorZeroAt { point, .. } => Error::DenominatorZeroAt {
                        entry: format!("entry ({r},{c})"),
                        point,
                    },
                    Error::NonFiniteValue { point, .. } => Error::NonFiniteValue {
                        entry: format!("entry ({r},{c})"),
                        point,
                    },
                    other => other,
                })?;
            }
        }
        Ok(m)
    }
}

/// Closed scheduling interval; bounds may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidModel(format!(
                "invalid domain interval [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// A bounded sub-interval used for sampling; infinite ends are clamped
    /// to a width-10 window anchored at the finite end (or centred at 0).
    pub fn bounded_probe(&self) -> (f64, f64) {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => (self.lo, self.hi),
            (true, false) => (self.lo, self.lo + 10.0),
            (false, true) => (self.hi - 10.0, self.hi),
            (false, false) => (-10.0, 10.0),
        }
    }
}

/// Which coefficient family an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientSide {
    /// Output-lag coefficients `A_1..A_{n_a}` (index is 1-based).
    A,
    /// Input-lag coefficients `B_0..B_{n_b-1}` (index is 0-based).
    B,
}

/// Validation diagnostic; diagnostics are data, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagnosticKind {
    DegenerateOrders,
    DenominatorVanishes,
    NonFiniteSample,
}

/// A discrete-time LPV input-output model.
#[derive(Debug, Clone, PartialEq)]
pub struct LpvIoModel {
    n_y: usize,
    n_u: usize,
    n_p: usize,
    n_a: usize,
    n_b: usize,
    a_coeffs: Vec<CoefficientMatrix>,
    b_coeffs: Vec<CoefficientMatrix>,
    domain: Vec<Interval>,
}

impl LpvIoModel {
    /// Builds and structurally validates a model. `a_coeffs` holds
    /// `A_1..A_{n_a}` and `b_coeffs` holds `B_0..B_{n_b-1}`.
    pub fn new(
        n_y: usize,
        n_u: usize,
        n_p: usize,
        a_coeffs: Vec<CoefficientMatrix>,
        b_coeffs: Vec<CoefficientMatrix>,
        domain: Vec<Interval>,
    ) -> Result<Self> {
        if n_y == 0 || n_u == 0 || n_p == 0 {
            return Err(Error::InvalidModel(
                "n_y, n_u and n_p must be positive".into(),
            ));
        }
        let n_a = a_coeffs.len();
        let n_b = b_coeffs.len();
        if n_b == 0 {
            return Err(Error::InvalidModel("n_b must be at least 1".into()));
        }
        if n_a == 0 && n_b == 1 {
            return Err(Error::DegenerateOrders);
        }
        if domain.len() != n_p {
            return Err(Error::DimensionMismatch(format!(
                "domain has {} intervals, expected n_p = {n_p}",
                domain.len()
            )));
        }
        for (i, m) in a_coeffs.iter().enumerate() {
            if m.rows() != n_y || m.cols() != n_y {
                return Err(Error::DimensionMismatch(format!(
                    "A_{} is {}x{}, expected {n_y}x{n_y}",
                    i + 1,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (i, m) in b_coeffs.iter().enumerate() {
            if m.rows() != n_y || m.cols() != n_u {
                return Err(Error::DimensionMismatch(format!(
                    "B_{i} is {}x{}, expected {n_y}x{n_u}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (label, m) in a_coeffs
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("A_{}", i + 1), m))
            .chain(
                b_coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (format!("B_{i}"), m)),
            )
        {
            for (idx, e) in m.entries().iter().enumerate() {
                if e.denominator().iter().all(|t| t.coef == 0.0) {
                    return Err(Error::ZeroDenominator {
                        entry: format!("{label} entry {idx}"),
                    });
                }
                for t in e.numerator().iter().chain(e.denominator()) {
                    if t.exponents.len() != n_p {
                        return Err(Error::MalformedTerm(format!(
                            "{label} entry {idx}: exponent vector length {} != n_p = {n_p}",
                            t.exponents.len()
                        )));
                    }
                }
            }
        }
        Ok(LpvIoModel {
            n_y,
            n_u,
            n_p,
            n_a,
            n_b,
            a_coeffs,
            b_coeffs,
            domain,
        })
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn n_u(&self) -> usize {
        self.n_u
    }

    pub fn n_p(&self) -> usize {
        self.n_p
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn a_coeffs(&self) -> &[CoefficientMatrix] {
        &self.a_coeffs
    }

    pub fn b_coeffs(&self) -> &[CoefficientMatrix] {
        &self.b_coeffs
    }

    /// True when every coefficient entry is constant (a frozen LTI model).
    pub fn is_constant(&self) -> bool {
        self.a_coeffs.iter().all(CoefficientMatrix::is_constant)
            && self.b_coeffs.iter().all(CoefficientMatrix::is_constant)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.n_p && p.iter().zip(&self.domain).all(|(&x, iv)| iv.contains(x))
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        if !self.contains(p) {
            return Err(Error::OutsideDomain { point: p.to_vec() });
        }
        Ok(())
    }

    /// Evaluates `A_index` (1-based) or `B_index` (0-based) at `p`.
    pub fn eval_coefficient(
        &self,
        side: CoefficientSide,
        index: usize,
        p: &[f64],
    ) -> Result<DMatrix<f64>> {
        self.check_point(p)?;
        match side {
            CoefficientSide::A => {
                if index == 0 || index > self.n_a {
                    return Err(Error::IndexOutOfRange(format!(
                        "A_{index} (valid range 1..={})",
                        self.n_a
                    )));
                }
                self.a_coeffs[index - 1].eval(p)
            }
            CoefficientSide::B => {
                if index >= self.n_b {
                    return Err(Error::IndexOutOfRange(format!(
                        "B_{index} (valid range 0..={})",
                        self.n_b - 1
                    )));
                }
                self.b_coeffs[index].eval(p)
            }
        }
    }

    /// Bounded box used for interior sampling.
    pub fn probe_box(&self) -> Vec<(f64, f64)> {
        self.domain.iter().map(Interval::bounded_probe).collect()
    }

    /// Midpoint grid over the probe box, `per_dim` points per dimension.
    fn probe_points(&self, per_dim: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .probe_box()
            .iter()
            .map(|&(lo, hi)| {
                (0..per_dim)
                    .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / per_dim as f64)
                    .collect()
            })
            .collect();
        let mut pts = vec![Vec::new()];
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
        pts
    }

    /// Checks model invariants and samples every coefficient on an interior
    /// grid. Returns an empty list iff no diagnostic fires.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.n_a == 0 && self.n_b == 1 {
            out.push(Diagnostic {
                kind: DiagnosticKind::DegenerateOrders,
                message: "degenerate orders: n_a = 0 and n_b = 1".into(),
            });
        }
        let per_dim = match self.n_p {
            1 => 16,
            2 => 4,
            _ => 2,
        };
        let points = self.probe_points(per_dim);
        let labelled = self
            .a_coeffs
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("A_{}", i + 1), m))
            .chain(
                self.b_coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (format!("B_{i}"), m)),
            );
        for (label, m) in labelled {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let e = m.entry(r, c);
                    let mut prev_den: Option<f64> = None;
                    let mut vanishes = false;
                    let mut non_finite = false;
                    for p in &points {
                        let (num, den) = e.eval_parts(p);
                        if den == 0.0 || den.abs() < DENOMINATOR_GUARD * num.abs().max(1.0) {
                            vanishes = true;
                        }
                        // A sign change of the denominator along the sampled
                        // grid implies a zero crossing inside the domain.
                        if let Some(pd) = prev_den {
                            if pd.signum() != den.signum() && pd != 0.0 && den != 0.0 {
                                vanishes = true;
                            }
                        }
                        prev_den = Some(den);
                        if den != 0.0 && !(num / den).is_finite() {
                            non_finite = true;
                        }
                    }
                    if vanishes {
                        out.push(Diagnostic {
                            kind: DiagnosticKind::DenominatorVanishes,
                            message: format!("denominator of {label} ({r},{c}) vanishes in domain"),
                        });
                    }
                    if non_finite {
                        out.push(Diagnostic {
                            kind: DiagnosticKind::NonFiniteSample,
                            message: format!("{label} ({r},{c}) evaluates non-finite in domain"),
                        });
                    }
                }
            }
        }
        out
    }
}

/// Finite scheduling trajectory: an ordered list of points in `R^{n_p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchedulingTrajectory {
    points: Vec<Vec<f64>>,
}

impl SchedulingTrajectory {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Trajectory("scheduling trajectory is empty".into()));
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::Trajectory(
                "scheduling points must share a positive dimension".into(),
            ));
        }
        Ok(SchedulingTrajectory { points })
    }

    /// Constant trajectory at `p` of length `len`.
    pub fn constant(p: &[f64], len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Trajectory("trajectory length must be > 0".into()));
        }
        SchedulingTrajectory::new(vec![p.to_vec(); len])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Prefix of the first `len` points.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(Error::Trajectory(format!(
                "cannot truncate length-{} trajectory to {len}",
                self.len()
            )));
        }
        SchedulingTrajectory::new(self.points[..len].to_vec())
    }
}

// ---------------------------------------------------------------------------
// Model document (de)serialization.
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct ModelDoc {
    n_y: usize,
    n_u: usize,
    n_p: usize,
    n_a: usize,
    n_b: usize,
    domain: Vec<[BoundDoc; 2]>,
    #[serde(rename = "A")]
    a: Vec<Vec<Vec<EntryDoc>>>,
    #[serde(rename = "B")]
    b: Vec<Vec<Vec<EntryDoc>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum BoundDoc {
    Number(f64),
    Word(String),
}

impl BoundDoc {
    fn to_f64(&self) -> Result<f64> {
        match self {
            BoundDoc::Number(x) => Ok(*x),
            BoundDoc::Word(w) => match w.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(Error::InvalidModel(format!(
                    "unrecognized domain bound `{other}`"
                ))),
            },
        }
    }

    fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            BoundDoc::Word("inf".into())
        } else if x == f64::NEG_INFINITY {
            BoundDoc::Word("-inf".into())
        } else {
            BoundDoc::Number(x)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum EntryDoc {
    Constant(f64),
    Rational {
        num: Vec<(f64, Vec<i32>)>,
        #[serde(skip_serializing_if = "Option::is_none")]
        den: Option<Vec<(f64, Vec<i32>)>>,
    },
}

impl EntryDoc {
    fn to_rational(&self, n_p: usize) -> Result<LaurentRational> {
        match self {
            EntryDoc::Constant(c) => Ok(LaurentRational::constant(*c, n_p)),
            EntryDoc::Rational { num, den } => {
                let conv = |ts: &Vec<(f64, Vec<i32>)>| -> Vec<Term> {
                    ts.iter()
                        .map(|(c, e)| Term::new(*c, e.clone()))
                        .collect()
                };
                LaurentRational::new(
                    conv(num),
                    den.as_ref().map(&conv).unwrap_or_default(),
                    n_p,
                )
            }
        }
    }

    fn from_rational(r: &LaurentRational) -> Self {
        if let Some(c) = r.constant_value() {
            if r.numerator().len() == 1 && r.has_unit_denominator() {
                return EntryDoc::Constant(c);
            }
        }
        let conv = |ts: &[Term]| -> Vec<(f64, Vec<i32>)> {
            ts.iter().map(|t| (t.coef, t.exponents.clone())).collect()
        };
        let den = if r.has_unit_denominator() {
            None
        } else {
            Some(conv(r.denominator()))
        };
        EntryDoc::Rational {
            num: conv(r.numerator()),
            den,
        }
    }
}

fn matrix_to_doc(m: &CoefficientMatrix) -> Vec<Vec<EntryDoc>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| EntryDoc::from_rational(m.entry(r, c)))
                .collect()
        })
        .collect()
}

fn matrix_from_doc(doc: &[Vec<EntryDoc>], n_p: usize, what: &str) -> Result<CoefficientMatrix> {
    let rows = doc.len();
    if rows == 0 {
        return Err(Error::DimensionMismatch(format!("{what} has no rows")));
    }
    let cols = doc[0].len();
    if cols == 0 || doc.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!(
            "{what} rows have inconsistent lengths"
        )));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in doc {
        for e in row {
            entries.push(e.to_rational(n_p)?);
        }
    }
    CoefficientMatrix::new(rows, cols, entries)
}

/// Parses a model document (JSON) into a validated model.
pub fn parse_model(text: &str) -> Result<LpvIoModel> {
    let doc: ModelDoc = serde_json::from_str(text)?;
    if doc.a.len() != doc.n_a {
        return Err(Error::DimensionMismatch(format!(
            "document declares n_a = {} but lists {} A matrices",
            doc.n_a,
            doc.a.len()
        )));
    }
    if doc.b.len() != doc.n_b {
        return Err(Error::DimensionMismatch(format!(
            "document declares n_b = {} but lists {} B matrices",
            doc.n_b,
            doc.b.len()
        )));
    }
    let domain = doc
        .domain
        .iter()
        .map(|[lo, hi]| Interval::new(lo.to_f64()?, hi.to_f64()?))
        .collect::<Result<Vec<_>>>()?;
    let a = doc
        .a
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_from_doc(m, doc.n_p, &format!("A_{}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let b = doc
        .b
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_from_doc(m, doc.n_p, &format!("B_{i}")))
        .collect::<Result<Vec<_>>>()?;
    LpvIoModel::new(doc.n_y, doc.n_u, doc.n_p, a, b, domain)
}

/// Serializes a model to the canonical document form (pretty JSON).
pub fn serialize_model(model: &LpvIoModel) -> String {
    let doc = ModelDoc {
        n_y: model.n_y,
        n_u: model.n_u,
        n_p: model.n_p,
        n_a: model.n_a,
        n_b: model.n_b,
        domain: model
            .domain
            .iter()
            .map(|iv| [BoundDoc::from_f64(iv.lo), BoundDoc::from_f64(iv.hi)])
            .collect(),
        a: model.a_coeffs.iter().map(matrix_to_doc).collect(),
        b: model.b_coeffs.iter().map(matrix_to_doc).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("model document serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mech3_doc() -> &'static str {
        r#"{
            "n_y": 1, "n_u": 1, "n_p": 1, "n_a": 1, "n_b": 2,
            "domain": [["-inf", "inf"]],
            "A": [[[{"num": [[1.0, [1]]]}]]],
            "B": [[[1.0]], [[{"num": [[1.0, [1]]]}]]]
        }"#
    }

    #[test]
    fn parses_mech3_style_document() {
        let m = parse_model(mech3_doc()).unwrap();
        assert_eq!((m.n_y(), m.n_u(), m.n_a(), m.n_b()), (1, 1, 1, 2));
        let a1 = m.eval_coefficient(CoefficientSide::A, 1, &[5.0]).unwrap();
        assert_eq!(a1[(0, 0)], 5.0);
        let b1 = m.eval_coefficient(CoefficientSide::B, 1, &[5.0]).unwrap();
        assert_eq!(b1[(0, 0)], 5.0);
    }

    #[test]
    fn rejects_shape_mismatch() {
        let doc = r#"{
            "n_y": 2, "n_u": 1, "n_p": 1, "n_a": 1, "n_b": 1,
            "domain": [[-1, 1]],
            "A": [[[0.5], [0.5]]],
            "B": [[[1.0], [1.0]]]
        }"#;
        // A_1 is 2x1 for n_y = 2 -> dimension mismatch
        let err = parse_model(doc).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)), "{err}");
    }

    #[test]
    fn rejects_degenerate_orders() {
        let doc = r#"{
            "n_y": 1, "n_u": 1, "n_p": 1, "n_a": 0, "n_b": 1,
            "domain": [[-1, 1]],
            "A": [],
            "B": [[[1.0]]]
        }"#;
        assert!(matches!(
            parse_model(doc).unwrap_err(),
            Error::DegenerateOrders
        ));
    }

    #[test]
    fn rejects_identically_zero_denominator() {
        let r = LaurentRational::new(
            vec![Term::new(1.0, vec![0])],
            vec![Term::new(0.0, vec![0])],
            1,
        );
        assert!(matches!(r.unwrap_err(), Error::ZeroDenominator { .. }));
    }

    #[test]
    fn negative_exponents_evaluate() {
        // b_1(p) = p^{-1}: b_1(2) = 0.5
        let r = LaurentRational::monomial(1.0, vec![-1]);
        assert_eq!(r.eval(&[2.0]).unwrap(), 0.5);
    }

    #[test]
    fn denominator_zero_is_hard_error() {
        let r = LaurentRational::new(
            vec![Term::new(1.0, vec![0])],
            vec![Term::new(1.0, vec![1])],
            1,
        )
        .unwrap();
        assert!(matches!(
            r.eval(&[0.0]).unwrap_err(),
            Error::DenominatorZeroAt { .. }
        ));
        // p^{-1} at p = 0 must be an error, never a silent inf
        let m = LaurentRational::monomial(1.0, vec![-1]);
        assert!(m.eval(&[0.0]).is_err());
    }

    #[test]
    fn validate_flags_denominator_vanishing_in_domain() {
        // b(p) = 1/p on a domain containing 0
        let b0 = CoefficientMatrix::new(
            1,
            1,
            vec![LaurentRational::new(
                vec![Term::new(1.0, vec![0])],
                vec![Term::new(1.0, vec![1])],
                1,
            )
            .unwrap()],
        )
        .unwrap();
        let a1 = CoefficientMatrix::constant(1, 1, &[0.5], 1).unwrap();
        let m = LpvIoModel::new(
            1,
            1,
            1,
            vec![a1],
            vec![b0],
            vec![Interval::new(-1.0, 1.0).unwrap()],
        )
        .unwrap();
        let diags = m.validate();
        assert!(diags
            .iter()
            .any(|d| d.kind == DiagnosticKind::DenominatorVanishes));
    }

    #[test]
    fn validate_clean_model_is_empty() {
        let a1 = CoefficientMatrix::constant(1, 1, &[0.5], 1).unwrap();
        let b0 = CoefficientMatrix::constant(1, 1, &[1.0], 1).unwrap();
        let m = LpvIoModel::new(
            1,
            1,
            1,
            vec![a1],
            vec![b0],
            vec![Interval::new(-1.0, 1.0).unwrap()],
        )
        .unwrap();
        assert!(m.validate().is_empty());
    }

    #[test]
    fn roundtrip_preserves_evaluations_exactly() {
        let m = parse_model(mech3_doc()).unwrap();
        let reparsed = parse_model(&serialize_model(&m)).unwrap();
        for i in 0..100 {
            let p = [-5.0 + 0.1 * i as f64 + 0.037];
            let a = m.eval_coefficient(CoefficientSide::A, 1, &p).unwrap();
            let b = reparsed.eval_coefficient(CoefficientSide::A, 1, &p).unwrap();
            assert_eq!(a, b);
        }
    }
}
