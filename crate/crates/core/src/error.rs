use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A function value inside a finite-difference stencil was NaN or infinite.
    #[error("non-finite function value at abscissa {at}")]
    NonFinite { at: f64 },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate}, error estimate {error_estimate}")]
    NoConvergence { estimate: f64, error_estimate: f64 },

    /// Caller supplied arguments that violate a precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// Point lies outside the region where the map or field is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Puncture radius or circle parameters give an impossible configuration.
    #[error("geometric error: {0}")]
    Geometry(String),

    /// Evaluation at the cusp or on the singular axis.
    #[error("singular point: {0}")]
    Singular(String),

    /// A quotient whose denominator vanishes.
    #[error("division by zero: {0}")]
    Division(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }

    pub(crate) fn singular(msg: impl Into<String>) -> Self {
        Error::Singular(msg.into())
    }
}
