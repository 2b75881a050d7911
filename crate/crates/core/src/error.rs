use thiserror::Error;

/// Errors raised by model construction and the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwcError {
    /// A parameter or argument lies outside its admissible range.
    #[error("domain error: {what}")]
    Domain { what: String },

    /// Source, channel and coder alphabets do not fit together.
    #[error("alphabet mismatch: {what}")]
    AlphabetMismatch { what: String },

    /// Simulation or sweep configuration is unusable.
    #[error("invalid configuration: {what}")]
    InvalidConfig { what: String },

    /// A sweep failed at a specific grid point.
    #[error("grid point {index}: {source}")]
    GridPoint {
        index: usize,
        #[source]
        source: Box<TwcError>,
    },
}

impl TwcError {
    pub(crate) fn domain(what: impl Into<String>) -> Self {
        TwcError::Domain { what: what.into() }
    }

    pub(crate) fn mismatch(what: impl Into<String>) -> Self {
        TwcError::AlphabetMismatch { what: what.into() }
    }

    pub(crate) fn config(what: impl Into<String>) -> Self {
        TwcError::InvalidConfig { what: what.into() }
    }
}

pub type Result<T> = std::result::Result<T, TwcError>;
