//! Direct nonminimal state-space realizations of discrete-time linear
//! parameter-varying (LPV) input-output models, with numerical analysis of
//! their structural properties.
//!
//! An LPV-IO model is a higher-order difference equation whose coefficient
//! matrices depend on a measurable scheduling signal. Stacking the lagged
//! outputs and inputs as the state yields a state-space realization written
//! directly in the model's coefficient functions, with no dynamic or
//! nonlinear scheduling dependence. The price is nonminimality, and this
//! crate quantifies it:
//!
//! - [`model`]: the model class, its document format, and validation;
//! - [`realization`]: the direct realization and its constant shift blocks;
//! - [`numerics`]: SVD rank/kernel decisions, block companion eigenvalues,
//!   discrete Lyapunov solving, principal angles;
//! - [`analysis`]: reachability/observability matrices over scheduling
//!   trajectories, grid-swept frozen reachability conditions, the reduced
//!   observability form, reconstructability, frozen Kalman decomposition;
//! - [`simulate`]: IO and state-space simulation, stacked response
//!   decomposition, initial-state estimation, time-varying transformations;
//! - [`builtin`]: four benchmark systems with a regression fact table;
//! - [`cli`] and [`trajfile`]: the command-line front end and its file
//!   formats.
//!
//! Runnable walkthroughs live in `examples/`; start with
//! `cargo run --example realize_at_point`.

pub mod analysis;
pub mod builtin;
pub mod cli;
pub mod error;
pub mod model;
pub mod numerics;
pub mod realization;
pub mod simulate;
pub mod trajfile;

pub use error::{Error, Result};
pub use model::{
    parse_model, serialize_model, CoefficientMatrix, CoefficientSide, Interval, LaurentRational,
    LpvIoModel, SchedulingTrajectory, Term,
};
pub use realization::{build_direct, DirectRealization, StructureKind, SystemMatricesAtPoint};
