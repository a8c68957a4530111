use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{0}")]
    Io(String),

    #[error("replay mismatch: {0}")]
    Replay(String),

    #[error(transparent)]
    Core(#[from] vipaug_core::Error),
}

impl CliError {
    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// 2 for configuration problems, 3 for I/O and decoding, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use vipaug_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Replay(_) => 1,
            CliError::Core(e) => match e {
                E::InvalidConfig(_) | E::UnknownPixelOp(_) => 2,
                E::Io { .. } | E::Image { .. } | E::CacheFormat(_) => 3,
                _ => 1,
            },
        }
    }
}
