use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    #[error("negative value for {name}: {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("configuration needs at least one coupling point")]
    NoPoints,

    #[error("coupling point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("phase {phase} lies within {tol:e} rad of a singularity of S_j")]
    SingularPhase { phase: f64, tol: f64 },

    #[error("chiral condition has no non-negative solution (y_i = {0})")]
    Infeasible(f64),

    #[error("no nonreciprocity possible: Gamma_x = Gamma_y = {0}")]
    NoNonreciprocity(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
