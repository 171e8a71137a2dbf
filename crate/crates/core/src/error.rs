use std::path::PathBuf;

/// Errors shared across the geometry, estimation, and harness layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,

    #[error("non-finite coordinate ({x}, {y})")]
    NonFiniteCoordinate { x: f64, y: f64 },

    #[error("duplicate center (distance {dist:e} below 1e-12)")]
    DuplicateCenter { dist: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "area tolerance {tolerance:e} unreachable: undecided area {undecided:e} at depth {depth}"
    )]
    ToleranceUnreachable {
        tolerance: f64,
        undecided: f64,
        depth: u32,
    },

    #[error("quadrature failed to converge after {subdivisions} subdivisions")]
    QuadratureDiverged { subdivisions: usize },

    #[error("rejection sampler acceptance rate below 1e-4 ({accepted}/{attempts})")]
    RejectionFloor { accepted: usize, attempts: usize },

    #[error("invalid domain spec `{spec}`: {reason}")]
    DomainSpec { spec: String, reason: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("malformed CSV {path}: {reason}")]
    Csv { path: PathBuf, reason: String },

    #[error("io error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
