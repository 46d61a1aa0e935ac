use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("band limit {limit} exceeds grid Nyquist frequency {nyquist}")]
    BandLimitTooLarge { limit: f64, nyquist: f64 },
    #[error("band limit required but not set")]
    MissingBandLimit,
    #[error("degenerate symmetry: 2nu and 2nu1 agree mod 4")]
    DegenerateSymmetry,
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("unknown experiment: {0}")]
    UnknownExperiment(String),
    #[error("output directory {0} exists (use --force)")]
    OutputExists(String),
    #[error("missing column: {0}")]
    MissingColumn(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
