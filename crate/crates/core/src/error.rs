use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of a function (non-positive frequency, altitude below
    /// the accuracy table, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violates one of its invariants. `field` is a dotted key path.
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// Caller broke a calling contract (wrong sample count, mismatched lengths).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Interferer geometry cannot be resolved (e.g. ground below at zero altitude).
    #[error("degenerate geometry: {0}")]
    Geometry(String),

    /// Raised while running a sweep; carries the grid coordinates of the failing trial.
    #[error("trial failed at altitude {altitude_ft} ft, trial {trial}: {source}")]
    Trial {
        altitude_ft: f64,
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    /// Certification document or matrix failed validation.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Dotted key path of the offending configuration field, if any.
    pub fn field(&self) -> Option<&str> {
        match self {
            Error::Config { field, .. } => Some(field),
            Error::Trial { source, .. } => source.field(),
            _ => None,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
