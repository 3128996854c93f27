use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Invalid parameters reaching the library are configuration errors; every
/// other library failure is numeric.
impl From<axda::Error> for CliError {
    fn from(e: axda::Error) -> Self {
        match e {
            axda::Error::Domain(_) | axda::Error::Precondition(_) | axda::Error::Unsupported(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}
