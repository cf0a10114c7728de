use thiserror::Error;

use crate::geometry::GridError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown orbit kind `{0}`")]
    UnknownOrbitKind(String),
    #[error("bad params for orbit `{kind}`: {detail}")]
    OrbitParams { kind: String, detail: String },
    #[error("bad receiver: {0}")]
    Receiver(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForwardError {
    #[error("target time {r} is before the first arrival g(0) = {g0}")]
    OutOfRange { r: f64, g0: f64 },
    #[error("g^-1({r}) not bracketed within horizon t_max = {t_max}")]
    Horizon { r: f64, t_max: f64 },
    #[error("source coincides with the receiver at t = {t}")]
    DegenerateGeometry { t: f64 },
    #[error("invalid inversion config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InverseError {
    #[error("no sample exceeds the arrival threshold {threshold}")]
    NoSignal { threshold: f64 },
    #[error("arrival not bracketed: the record already carries signal at its first sample t = {t_start}")]
    OnsetNotBracketed { t_start: f64 },
    #[error("measurement query at {query} (t = {t}) lies outside the record [{start}, {end}]")]
    Horizon {
        t: f64,
        query: f64,
        start: f64,
        end: f64,
    },
    #[error("all field components vanish at t = {t}")]
    DegenerateData { t: f64 },
    #[error("distance became non-positive (v = {v}) at t = {t}")]
    BlowUp { t: f64, v: f64 },
    #[error("receivers are coplanar: |det X0| = {det:e} below {threshold:e}")]
    CoplanarReceivers { det: f64, threshold: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("receiver {index}: {source}")]
    Receiver {
        index: usize,
        #[source]
        source: Box<InverseError>,
    },
    #[error(transparent)]
    Forward(#[from] ForwardError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl InverseError {
    pub fn at_receiver(self, index: usize) -> Self {
        InverseError::Receiver {
            index,
            source: Box::new(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("relative error undefined: reference orbit is identically zero")]
    UndefinedMetric,
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

/// Crate-level error, used by the pipeline and the command line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Forward(#[from] ForwardError),
    #[error(transparent)]
    Inverse(#[from] InverseError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("scenario failed validation: {0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Format { path: String, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
