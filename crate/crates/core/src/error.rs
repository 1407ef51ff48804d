use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("spectral support not covered by the dual grid: {0}")]
    Coverage(String),

    #[error("angular aliasing: discarded tail energy {tail:.3e} exceeds {limit:.3e} of total")]
    Aliasing { tail: f64, limit: f64 },

    #[error("wavefront containment violated: {0}")]
    Wavefront(String),

    #[error("time grid must be uniform: {0}")]
    TimeGrid(String),

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("record format version mismatch: expected {expected}, got {got}")]
    Version { expected: u32, got: u32 },

    #[error("mode {k}: {source}")]
    Mode {
        k: i32,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn grid(msg: impl Into<String>) -> Self {
        Error::Grid(msg.into())
    }

    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Attach the angular mode index to an error from a per-mode computation.
    pub fn for_mode(self, k: i32) -> Self {
        Error::Mode {
            k,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
