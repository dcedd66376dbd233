use thiserror::Error;

use crate::operator::IntervalZ;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("interval of length {requested} exceeds the configured maximum {max}")]
    Capacity { requested: usize, max: usize },

    #[error("polynomial degree {degree} exceeds the configured maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("energy {energy} is (numerically) an eigenvalue of the restriction to {interval}")]
    SingularEnergy { energy: f64, interval: IntervalZ },

    #[error("site {site}: every candidate interval was singular-energy ({skipped} skipped)")]
    Indeterminate { site: i64, skipped: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("frequency is not Diophantine within the scan: sin(2*pi*j*omega) vanishes at j = {j}")]
    NotDiophantine { j: u64 },

    #[error("interpolation nodes {i} and {j} coincide")]
    DegenerateNodes { i: usize, j: usize },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("log singularity: z - f(x_{index}) = 0 at a non-excluded point")]
    LogSingularity { index: usize },

    #[error("block-resolvent certificate unavailable: site {site} is singular")]
    CertificateUnavailable { site: i64 },

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("fit range: {0}")]
    FitRange(String),

    #[error("iteration failed to converge: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
