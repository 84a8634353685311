use num_bigint::BigInt;
use thiserror::Error;

/// Errors produced anywhere in the core crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("degenerate polytope")]
    Degenerate,

    #[error("unsupported dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),

    #[error("dual unbounded: origin is not an interior point")]
    DualUnbounded,

    #[error("polytope is not Fano")]
    NotFano,

    #[error("non-saturated vertex lattice (vertices generate a sublattice of index {0})")]
    NonSaturatedLattice(BigInt),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("negative dilation factor {0}")]
    NegativeDilation(i64),

    #[error("cone is not pointed or not positively graded")]
    NotPointed,

    #[error("value does not fit machine integers: {0}")]
    Overflow(&'static str),

    #[error("invalid encoding: {0}")]
    Encoding(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("training diverged at epoch {epoch} (non-finite loss)")]
    Diverged { epoch: usize },

    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("generator starved: no acceptance after {attempts} attempts ({diagnostics})")]
    Starvation { attempts: usize, diagnostics: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
