use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid filter size {size} for a {height}x{width} grid")]
    InvalidFilter { size: usize, height: usize, width: usize },

    #[error("invalid rank {rank} for a {size}x{size} window")]
    InvalidRank { rank: usize, size: usize },

    #[error("spectrum layout mismatch: expected {expected:?}, got {actual:?}")]
    LayoutMismatch {
        expected: crate::spectrum::Layout,
        actual: crate::spectrum::Layout,
    },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("unknown pixel op `{0}`")]
    UnknownPixelOp(String),

    #[error("fractal pool is empty")]
    EmptyPool,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("malformed pool cache: {0}")]
    CacheFormat(String),

    #[error("malformed error table: {0}")]
    Table(String),
}

impl Error {
    pub(crate) fn mismatch(expected: impl std::fmt::Display, actual: impl std::fmt::Display) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
