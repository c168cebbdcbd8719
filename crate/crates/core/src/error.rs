use thiserror::Error;

/// Error type shared by every operation in this crate.
///
/// Structural problems (mismatched lengths, size caps, bad indices) and
/// violated algorithm preconditions are both reported through this enum.
/// Solvable-but-degenerate linear systems are *not* errors; see
/// [`F2Solution`](crate::f2::F2Solution).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two bit strings (or a matrix and a vector) had incompatible lengths.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A size cap was exceeded ({what} names the capped quantity).
    #[error("{what} too large: limit {limit}, got {got}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    /// A qubit or bit index was out of range.
    #[error("index {index} out of range for size {size}")]
    BadIndex { index: usize, size: usize },

    /// Deterministic measurement was requested but no outcome has
    /// probability within tolerance of 1.
    #[error("no measurement outcome has probability 1 within tolerance")]
    NotDeterministic,

    /// The oracle does not satisfy the constant-or-balanced promise.
    #[error("oracle violates the constant-or-balanced promise")]
    PromiseViolated,

    /// Post-hoc verification showed the oracle is not affine.
    #[error("oracle is not an affine function")]
    NotAffine,

    /// The supplied marker strings do not form a basis of {0,1}^m.
    #[error("markers do not form a basis")]
    NotABasis,

    /// The oracle is not a bit-dropping function.
    #[error("oracle is not a bit-dropping function")]
    NotABitDrop,

    /// The oracle has the wrong shape for the requested solver.
    #[error("wrong oracle shape: {0}")]
    WrongShape(String),

    /// A textual bit string could not be parsed.
    #[error("invalid bit string: {0}")]
    InvalidBitString(String),

    /// A truth-table file failed to parse; positions are 1-based.
    #[error("truth table parse error at line {line}, column {column}: {message}")]
    TableParse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
