use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
    #[error("qubit index {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit {qubit} appears more than once in a term")]
    DuplicateQubit { qubit: usize },
    #[error("coefficient is not finite")]
    NonFiniteCoefficient,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("s = {s} lies outside the schedule domain [0, 1]")]
    ScheduleDomain { s: f64 },
    #[error("eigensolver did not converge{}: residuals {residuals:?}", at_s(.s))]
    NoConvergence { s: Option<f64>, residuals: Vec<f64> },
    #[error("operation needs stored eigenvectors")]
    MissingEigenvectors,
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("Hamiltonian has off-diagonal terms")]
    NonDiagonal,
    #[error("Hamiltonian has imaginary matrix elements; use complex state vectors")]
    ComplexOperator,
}

fn at_s(s: &Option<f64>) -> String {
    match s {
        Some(s) => alloc::format!(" at s = {s}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
