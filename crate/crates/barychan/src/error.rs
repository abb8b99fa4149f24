use thiserror::Error;

/// Errors produced by scenario validation, numerics, the solver, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("transmitter lies inside or on receiver `{receiver}` (|C - T| = {distance} <= R = {radius})")]
    TransmitterInsideReceiver {
        receiver: String,
        distance: f64,
        radius: f64,
    },

    #[error("receivers `{first}` and `{second}` interpenetrate (center distance {distance} < R1 + R2 = {radius_sum})")]
    OverlappingReceivers {
        first: String,
        second: String,
        distance: f64,
        radius_sum: f64,
    },

    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: String, value: f64 },

    #[error("parameter `{name}` is not finite")]
    NonFiniteParameter { name: String },

    #[error("adaptive quadrature exceeded {max_subdivisions} subdivisions (estimated error {error:e})")]
    MaxSubdivisionsExceeded {
        max_subdivisions: usize,
        error: f64,
    },

    #[error("series did not converge after {n_max} terms (last relative term {last_ratio:e})")]
    NotConverged { n_max: usize, last_ratio: f64 },

    #[error("gamma quadrature produced {value} outside [0, 1] beyond numerical tolerance")]
    GammaOutOfRange { value: f64 },

    #[error("total absorbed mass {total} exceeds budget {budget} at t = {time} s; reduce dt_solver or check geometry")]
    MassBudgetExceeded { total: f64, budget: f64, time: f64 },

    #[error("receiver `{receiver}` has no absorption events up to t = {time} s")]
    NoAbsorptions { receiver: String, time: f64 },

    #[error("duplicate receiver id `{0}`")]
    DuplicateReceiverId(String),

    #[error("scenario file error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("non-finite value in comparison row for receiver `{receiver}` at sweep value {sweep_value}")]
    NonFiniteRow { receiver: String, sweep_value: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
