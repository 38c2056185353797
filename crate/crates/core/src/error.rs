use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A descriptor string could not be parsed; `token` is the offending piece.
    #[error("cannot parse {what} descriptor at `{token}`: {reason}")]
    Descriptor { what: &'static str, token: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The label or point does not belong to the space it was used with.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("value {value} is not in the spectrum (nearest eigenvalue {nearest})")]
    NotInSpectrum { value: f64, nearest: f64 },

    /// The quadrature cannot integrate the requested products exactly.
    #[error("quadrature too coarse: {0}")]
    CoarseQuadrature(String),

    #[error("function is identically zero")]
    ZeroFunction,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn descriptor(what: &'static str, token: &str, reason: impl Into<String>) -> Self {
        Error::Descriptor { what, token: token.to_string(), reason: reason.into() }
    }
}
