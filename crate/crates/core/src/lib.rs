//! Forward synthesis and orbit reconstruction for a point source moving
//! inside a ball, observed through the tangential magnetic field at four
//! points on a surrounding sphere.
//!
//! The chain is [`forward`] (closed-form retarded field) → [`noise`] →
//! [`inverse`] (arrival times, distance ODE, trilateration) → [`metrics`].
//! [`pipeline`] ties the stages together and [`presets`] holds the four
//! reference experiments.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod forward;
pub mod geometry;
pub mod inverse;
pub mod io;
pub mod metrics;
pub mod noise;
pub mod ode;
pub mod orbit;
pub mod pipeline;
pub mod plot;
pub mod presets;
pub mod scenario;
pub mod series;
pub mod signal;

pub use error::{Error, Result};
pub use geometry::{Axis, TimeGrid, Vec3};
pub use noise::NoiseModel;
pub use orbit::OrbitSpec;
pub use presets::ExperimentPreset;
pub use scenario::{Receiver, Scenario};
pub use series::TimeSeries;
pub use signal::SourceSignal;
