use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the entropy, GLCM, feature and classification code.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A probability vector failed validation at construction.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Normalized entropy needs at least two outcomes.
    #[error("normalized entropy is undefined for a single outcome (H_max = H_min)")]
    DegenerateNormalization,

    /// No pixel pair lands inside the image for the requested spacing.
    #[error("empty co-occurrence matrix: no in-bounds pixel pair for d={d}, theta={theta}")]
    EmptyGlcm { d: u32, theta: u32 },

    /// Correlation is undefined when either marginal has zero variance.
    #[error("degenerate variance: correlation undefined (sigma_x={sigma_x}, sigma_y={sigma_y})")]
    DegenerateVariance { sigma_x: f64, sigma_y: f64 },

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    /// Malformed or truncated input; `offset` is the byte position where parsing stopped.
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by reading or decoding input rather than by
    /// invalid values.
    pub fn is_io_or_parse(&self) -> bool {
        matches!(
            self,
            Error::Io { .. } | Error::Parse { .. } | Error::UnsupportedFormat(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
