use thiserror::Error;

/// Errors produced by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid knots: {0}")]
    InvalidKnots(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource cap exceeded: {what} would need {needed}, cap is {cap}")]
    ResourceCap {
        what: &'static str,
        needed: usize,
        cap: usize,
    },

    #[error("map is not piecewise linear: {0}")]
    NotPiecewiseLinear(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no sign change of {0} in the bracket")]
    NoSignChange(String),

    #[error("itinerary mismatch: expected {expected}, found {found}")]
    ItineraryMismatch { expected: String, found: String },

    #[error("root search failed: {0}")]
    RootSearch(String),

    #[error("no qualifying gap: {0}")]
    NoQualifyingGap(String),

    #[error("count shortfall: measured {measured} crossings, need at least {required}")]
    CountShortfall { measured: usize, required: f64 },

    #[error("network output leaves [0,1]: min {min}, max {max}")]
    CodomainViolation { min: String, max: String },

    #[error("non-convergence: {0}")]
    NonConvergence(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
