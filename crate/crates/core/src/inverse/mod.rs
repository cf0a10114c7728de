//! Orbit reconstruction from the four boundary traces: arrival times, the
//! distance ODE per receiver, then trilateration at each time.

pub mod access;
pub mod arrival;
pub mod distance;
pub mod reconstruct;
pub mod trilaterate;

pub use access::{ExactField, FieldAccess, InterpolatedSeries};
pub use arrival::{detect_arrival, ArrivalChannel, ArrivalTime};
pub use distance::{
    distance_ode_rhs, solve_distance_ode, ComponentMode, ComponentStrategy, DistanceFunction,
    DistanceProblem, OdeAbort,
};
pub use reconstruct::{
    reconstruct, reconstruct_from_distances, reconstruct_orbit, reconstruction_grid,
    recover_distance, InverseSettings, Reconstruction, ReconstructedOrbit,
};
pub use trilaterate::{trilaterate, Trilaterator};
