use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] toric_hld::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    ReproFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use toric_hld::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(E::InvalidArgument(_)) => 1,
            CliError::Core(E::ConfigMismatch(_)) => 3,
            CliError::Core(_) | CliError::Io(_) => 2,
            CliError::ReproFailed(_) => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
