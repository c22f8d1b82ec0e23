use deepwater_evans::EvansError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Evans(#[from] EvansError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed checks: {}", .0.join(", "))]
    Checks(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Evans(EvansError::Invalid(_)) => 2,
            _ => 1,
        }
    }
}
