use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chassis geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid steering limits: {0}")]
    InvalidLimits(String),

    #[error("asymmetric steering limits [{min}, {max}] rad are not supported")]
    AsymmetricLimits { min: f64, max: f64 },

    #[error("region table construction failed: {0}")]
    TableConstruction(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("path planning failed: {0}")]
    Planning(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
