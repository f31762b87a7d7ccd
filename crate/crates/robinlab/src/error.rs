use thiserror::Error;

/// Errors produced by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("root bracket failure on [{lo}, {hi}]: {what}")]
    Bracket { lo: f64, hi: f64, what: String },
    #[error("spectrum incomplete: requested {requested} but complete only below {complete_below}")]
    Incomplete { requested: f64, complete_below: f64 },
    #[error("not star-shaped about ({x0}, {y0}): (x - x0).nu = {value} at ({px}, {py})")]
    NotStarShaped {
        x0: f64,
        y0: f64,
        px: f64,
        py: f64,
        value: f64,
    },
    #[error("unavailable for this domain: {0}")]
    Unavailable(String),
    #[error("meshing failed: {0}")]
    Mesh(String),
    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
    #[error("matrix not positive definite at pivot {0}")]
    NotPositiveDefinite(usize),
    #[error("function numerically zero")]
    NumericallyZero,
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
