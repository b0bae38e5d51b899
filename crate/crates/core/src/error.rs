use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the computation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter combination that cannot be realised physically or by the planner.
    #[error("configuration error: {0}")]
    Config(String),

    /// A topology or scenario document failed validation.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Spectrum(#[from] crate::spectrum::SpectrumError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
