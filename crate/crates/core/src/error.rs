use thiserror::Error;

/// Errors raised by malformed inputs and infeasible requests.
///
/// Structurally valid pools that merely fail a completeness check are not
/// errors; they produce an incomplete [`crate::group::CompletenessReport`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty Pauli string")]
    EmptyPauli,

    #[error("invalid character {ch:?} at position {position} in Pauli string")]
    InvalidPauliChar { ch: char, position: usize },

    #[error("Pauli string has {0} qubits, at most 64 are supported")]
    TooManyQubits(usize),

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("basis index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: u64, n_qubits: usize },

    #[error("{0} is an even Pauli string; an odd (real antisymmetric) generator is required")]
    EvenGenerator(String),

    #[error("empty pool")]
    EmptyPool,

    #[error("group rank {rank} exceeds the enumeration cap {cap}")]
    EnumerationInfeasible { rank: usize, cap: usize },

    #[error("odd-count target needs at least 2 qubits, got {0}")]
    TooFewQubits(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("non-real Hamiltonian: term {0} has an odd number of Y factors")]
    NonRealHamiltonian(String),

    #[error("invalid symmetry spec: {0}")]
    Symmetry(String),

    #[error("requested {requested} distinct strings but only {available} are available")]
    InsufficientStrings { requested: u64, available: u64 },

    #[error("infeasible starter count {requested}: pool size is {pool_size}, at most {max} starters allowed")]
    InfeasibleStarters {
        requested: usize,
        pool_size: usize,
        max: usize,
    },

    #[error("no pool accepted after {attempts} attempts ({diagnostics})")]
    AttemptsExhausted { attempts: u64, diagnostics: String },

    #[error("Lanczos did not converge after {iterations} iterations (residual {residual:e})")]
    LanczosNotConverged { iterations: usize, residual: f64 },

    #[error("{n_qubits} qubits exceeds the configured cap of {cap}")]
    TooLarge { n_qubits: usize, cap: usize },

    #[error("non-finite energy or gradient encountered")]
    NonFinite,

    #[error("optimizer made no descent at iteration {iteration} (gradient norm {grad_norm:e})")]
    OptimizerFailed {
        iteration: usize,
        grad_norm: f64,
        partial: Box<crate::adapt::AdaptTrace>,
    },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
