use thiserror::Error;

/// Errors raised by graph construction, Hamiltonian building and the evaluators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LmcError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not regular: vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("unknown named graph `{0}`")]
    UnknownGraph(String),

    #[error("edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    #[error("random regular generation failed after {attempts} attempts (n={n}, d={d}, girth>={min_girth})")]
    GenerationFailed {
        n: usize,
        d: usize,
        min_girth: usize,
        attempts: usize,
    },

    #[error("{what} = {got} exceeds the supported maximum {max}")]
    Capacity {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),

    #[error("expectation has non-vanishing imaginary part {imag:e}")]
    NonRealExpectation { imag: f64 },

    #[error("singular denominator at p = {p}")]
    SingularDenominator { p: f64 },
}

pub type Result<T> = std::result::Result<T, LmcError>;
