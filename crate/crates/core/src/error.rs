use thiserror::Error;

use crate::solver::SolverReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid box [{lower}, {upper}]: need lower <= 0 <= upper")]
    InvalidBox { lower: f64, upper: f64 },

    #[error("invalid argument `{name}` = {value}: {reason}")]
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("empty interval: t1 = {t1} > t2 = {t2}")]
    EmptyInterval { t1: f64, t2: f64 },

    #[error("no interior optimum for `{parameter}`: bracket reached the search limit {limit}")]
    NoInteriorOptimum { parameter: &'static str, limit: f64 },

    #[error("saddle point is not stationary: residual {residual:e} exceeds {bound:e}")]
    NotStationary { residual: f64, bound: f64 },

    #[error("multi-start saddle searches disagree (relative spread {spread:e})")]
    NonUniqueOptimum { spread: f64 },

    #[error("scalar solution implies a negative MSE ({mse:e})")]
    InconsistentSolution { mse: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("solver hit the iteration limit ({}) before converging", .0.iterations)]
    MaxIterExceeded(Box<SolverReport>),

    #[error("cannot build orthogonal pilots: {pilots} pilot symbols for {antennas} antennas")]
    PilotRankError { antennas: usize, pilots: usize },

    #[error("brute-force oracle supports at most 6 coordinates, got {0}")]
    OracleTooLarge(usize),

    #[error("trial {index}: {source}")]
    Trial {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidArgument {
            name,
            value,
            reason,
        }
    }
}
