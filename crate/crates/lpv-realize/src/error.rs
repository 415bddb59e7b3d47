//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed rational term: {0}")]
    MalformedTerm(String),

    #[error("degenerate orders: n_a = 0 and n_b = 1 leave no dynamics to realize")]
    DegenerateOrders,

    #[error("denominator of {entry} is identically zero")]
    ZeroDenominator { entry: String },

    #[error("denominator of {entry} vanishes at p = {point:?}")]
    DenominatorZeroAt { entry: String, point: Vec<f64> },

    #[error("evaluation of {entry} at p = {point:?} is not finite")]
    NonFiniteValue { entry: String, point: Vec<f64> },

    #[error("point {point:?} lies outside the scheduling domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("coefficient index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("matrix contains non-finite entries")]
    NonFiniteMatrix,

    #[error("eigenvalue iteration did not converge for a {0}x{0} matrix")]
    EigenFailure(usize),

    #[error("trajectory error: {0}")]
    Trajectory(String),

    #[error("evaluation failed at step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("transformation is near-singular at step {step} (condition estimate {cond:.3e})")]
    SingularTransform { step: usize, cond: f64 },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("unknown example id `{0}` (expected mech1..mech4)")]
    UnknownExample(String),

    #[error("{0}")]
    InvalidModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("model document error: {0}")]
    Document(#[from] serde_json::Error),
}

impl Error {
    /// Wraps an evaluation error with the time step at which it occurred.
    pub fn at_step(self, step: usize) -> Error {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
