use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input or a violated invariant. `path` names the offending field
    /// when the input came from a document.
    #[error("validation error{}: {message}", path.as_ref().map(|p| format!(" at {p}")).unwrap_or_default())]
    Validation {
        path: Option<String>,
        message: String,
    },

    /// The requested point lies outside the region where the evaluation is trustworthy.
    #[error("numerical domain error at s = {}: {reason}", fmt_complex(.s))]
    Domain { s: Complex64, reason: String },

    #[error("pole at s = {}: {reason}", fmt_complex(.s))]
    Pole { s: Complex64, reason: String },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(message: impl Into<String>) -> Self {
        Error::Validation {
            path: None,
            message: message.into(),
        }
    }

    pub fn invalid_at(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: Some(path.into()),
            message: message.into(),
        }
    }

    pub fn domain(s: Complex64, reason: impl Into<String>) -> Self {
        Error::Domain {
            s,
            reason: reason.into(),
        }
    }

    /// Process exit status for this error: 1 for bad input, 2 for numerical-domain failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Io { .. } | Error::Json(_) => 1,
            Error::Domain { .. } | Error::Pole { .. } | Error::Quadrature(_) => 2,
        }
    }
}

fn fmt_complex(z: &Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}
