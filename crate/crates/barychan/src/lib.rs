//! Modeling of diffusive molecular-communication channels with multiple
//! fully absorbing (FA) spherical receivers.
//!
//! The crate covers four layers:
//!
//! - [`analytic`]: closed-form single-receiver responses and the coupled
//!   two-receiver series solution.
//! - [`barycenter`]: the analytic barycenter of each receiver — the point
//!   where a neighboring FA receiver is replaced by a negative point
//!   source — built from the ring-weighted γ quadrature and
//!   gravitation-style combination weights.
//! - [`solver`]: a causal time-domain solver of the coupled convolution
//!   system for any number of receivers.
//! - [`pbs`]: a Brownian particle-based simulator used as ground truth,
//!   with reproducible per-particle random streams.
//!
//! [`model`] holds the validated scenario description shared by all of
//! them, and [`harness`] adds scenario files, sweep experiments and CSV
//! output. See the `examples/` directory for one runnable example per
//! capability.

pub mod analytic;
pub mod barycenter;
pub mod error;
pub mod harness;
pub mod model;
pub mod numerics;
pub mod pbs;
pub mod solver;

pub use error::{Error, Result};
pub use model::{
    Medium, PbsParams, Point3, ReceiverGeometry, Scenario, TimeGrid, Transmitter,
    ValidatedScenario,
};
