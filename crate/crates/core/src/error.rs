use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its documented constraint.
    #[error("invalid parameter `{name}` = {value}: expected {expected}")]
    Parameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// An argument lies outside the support of the function.
    #[error("{name} = {value} lies outside the domain [{lo}, {hi}]")]
    Domain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("ensemble `{0}` has no fluctuators")]
    EmptyEnsemble(&'static str),

    #[error("{0} points given, at least 2 are required")]
    TooFewPoints(usize),

    #[error("length mismatch: {left} frequencies vs {right} spectral values")]
    LengthMismatch { left: usize, right: usize },

    #[error("quadrature did not converge: estimated relative error {achieved:e} > requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("eigensolver did not converge")]
    Eigen,

    #[error("time grid must be finite, nonnegative and nondecreasing (bad entry at index {0})")]
    Grid(usize),

    #[error("time {tau} lies beyond the trajectory horizon {horizon}")]
    BeyondHorizon { tau: f64, horizon: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Parameter {
            name,
            value,
            expected,
        }
    }
}
