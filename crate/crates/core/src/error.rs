use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid gate {gate}: {reason}")]
    InvalidGate { gate: String, reason: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n_qubits} qubits exceeds the cap of {cap} for dense unitary assembly")]
    TooManyQubits { n_qubits: usize, cap: usize },

    #[error("qubit count {0} outside the supported range 1..=7")]
    QubitRange(usize),

    #[error("parameter vector has length {found}, ansatz needs {expected}")]
    ParamLength { expected: usize, found: usize },

    #[error("labeled pool is empty")]
    EmptyPool,

    #[error("no unlabeled states left to select from")]
    NoUnlabeled,

    #[error("budget {budget} exceeds pool size {pool}")]
    BudgetExceedsPool { budget: usize, pool: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("improvement undefined: baseline similarity {0} is not positive")]
    UndefinedRatio(f64),

    #[error("failed to parse circuit line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
