use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("fault location {location} out of range ({len} operations)")]
    LocationOutOfRange { location: usize, len: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("circuit file line {line}: {msg}")]
    CircuitFile { line: usize, msg: String },

    #[error("circuit check failed: {0}")]
    CircuitCheck(String),

    #[error("unsupported stabilizer: {0}")]
    UnsupportedStabilizer(String),

    #[error("lookup table construction failed: {0}")]
    LutConflict(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
