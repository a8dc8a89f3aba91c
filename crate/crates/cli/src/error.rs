use bcnf::classify::ClassifyError;
use bcnf::config::ConfigError;
use bcnf::curves::CurveError;
use bcnf::filippov::FilippovError;
use bcnf::flu::FluError;
use bcnf::maps::MapError;
use bcnf::sweep::SweepError;
use std::path::PathBuf;
use thiserror::Error;

/// Exit 2 for bad input (usage or configuration), 1 for failures while running.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Pool(_) | SweepError::Csv(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::Csv(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::NonFinite { .. } | MapError::Word(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<FilippovError> for CliError {
    fn from(e: FilippovError) -> Self {
        match e {
            FilippovError::Params(_) | FilippovError::Config(_) | FilippovError::Domain(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<FluError> for CliError {
    fn from(e: FluError) -> Self {
        match e {
            FluError::Params(_) | FluError::Config(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}
