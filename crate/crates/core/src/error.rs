use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("qubit {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid control condition: {0}")]
    InvalidControl(String),
    #[error("qasm emission needs a transpiled circuit (found '{0}')")]
    Untranspiled(String),
    #[error("simulation of {qubits} qubits exceeds the cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },
    #[error("synthesis invariant violated: {0}")]
    Synthesis(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
