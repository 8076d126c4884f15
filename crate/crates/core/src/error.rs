use thiserror::Error;

/// Errors raised by the simulator, the circuit builders and the oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("qubit {qubit} out of range for a {count}-qubit state")]
    QubitOutOfRange { qubit: usize, count: usize },

    #[error("qubit {0} appears more than once in a gate")]
    DuplicateQubit(usize),

    #[error("2x2 block is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("diagonal entry {index} has modulus {modulus}, expected 1")]
    NotUnitModulus { index: usize, modulus: f64 },

    #[error("diagonal has {got} entries, expected {expected}")]
    DiagonalLength { expected: usize, got: usize },

    #[error("state norm is {norm}, expected 1")]
    Normalization { norm: f64 },

    #[error("register mismatch: {0}")]
    RegisterMismatch(String),

    #[error("{0} sites is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite amplitude after step {step}")]
    NonFinite { step: usize },

    #[error("quadrature did not converge (last change {change:e})")]
    QuadratureNotConverged { change: f64 },

    #[error("qasm line {line}: {message}")]
    QasmParse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
