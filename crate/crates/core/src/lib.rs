//! Grid-cell path integration on a twisted torus.
//!
//! A planar vehicle's body-frame velocity and heading drive a continuous
//! attractor network of rate neurons arranged on a twisted torus. The
//! localized activity bump shifts in proportion to the velocity input, and
//! tracking the bump phase recovers the vehicle position without any
//! external fix. The crate also ships a synthetic trajectory harness with
//! dead-reckoning and Kalman baselines so the estimator can be benchmarked
//! end to end.
//!
//! Module map:
//! - [`config`] — hyperparameters and validation
//! - [`topology`] — cell positions and the twisted-torus distance
//! - [`network`] — activity state, naive weight matrix, dynamics step
//! - [`kernel`] — O(N) relative kernel and the fast correlation transfer
//! - [`integrator`] — velocity modulation, bump decoding, path integration
//! - [`harness`] — trajectory generators, disturbances, baselines, metrics

// negated float comparisons below are deliberate NaN-rejecting guards
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod harness;
pub mod integrator;
pub mod kernel;
pub mod network;
pub mod topology;
mod vec2;

pub use config::GridConfig;
pub use error::{Error, Result};
pub use harness::{DisturbanceSpec, ErrorReport};
pub use integrator::{BumpPhase, PathIntegrator, PositionEstimate, TrajectorySample, VelocityInput};
pub use kernel::RelativeKernel;
pub use network::{GridState, WeightKernel};
pub use topology::CellGrid;
pub use vec2::Vec2;
