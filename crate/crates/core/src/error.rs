use std::fmt;

use thiserror::Error;

/// Position of a diagnostic inside bra-ket source text (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourcePos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error at {pos}: {message}")]
pub struct ParseError {
    pub pos: SourcePos,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra level {0} is outside 0..=4")]
    InvalidLevel(u8),

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u8, right: u8 },

    #[error("level {level} needs {expected} coefficients, got {got}")]
    CoefficientCount {
        level: u8,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("element has zero norm and no inverse")]
    Singular,

    #[error("qubit count {0} is outside 1..=4")]
    QubitCount(usize),

    #[error("{n}-qubit state needs {expected} amplitudes, got {got}")]
    Shape {
        n: usize,
        expected: usize,
        got: usize,
    },

    #[error("state vector is zero")]
    Degenerate,

    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid qubit permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndex { index: usize, n: usize },

    #[error("{op} is not defined for {n} qubits")]
    Unsupported { op: &'static str, n: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("state file: {0}")]
    StateFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
