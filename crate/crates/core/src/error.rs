//! Error type shared by every module of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or transforming kernels,
/// parameter fields, polynomial tables, and triangular arrays.
///
/// Variants split into two families: *validation* errors (malformed input,
/// indices out of range, parameters outside their domain) and *numerical*
/// errors (sections that are not strictly positive, square roots that do not
/// exist in the chosen arithmetic). The CLI maps the former to exit code 2
/// and the latter to exit code 3.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("index pair ({k},{j}) outside truncation of size {size}")]
    IndexOutOfRange { k: usize, j: usize, size: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("duplicate entry for index pair ({k},{j})")]
    DuplicateEntry { k: usize, j: usize },

    #[error("entry ({k},{j}) lies below the diagonal; provide the upper triangle only")]
    LowerTriangleEntry { k: usize, j: usize },

    #[error("diagonal entry {index} is not real and strictly positive")]
    BadDiagonal { index: usize },

    #[error("kernel section {r}..{q} is not strictly positive")]
    NotStrictlyPositive { r: usize, q: usize },

    #[error("parameter gamma({k},{j}) lies outside the open unit disk")]
    ParameterOutOfDisk { k: usize, j: usize },

    #[error("missing parameter for index pair ({k},{j})")]
    MissingParameter { k: usize, j: usize },

    #[error("zero diagonal entry at index {index}; triangular array is not invertible")]
    ZeroDiagonal { index: usize },

    #[error("square root of {value} does not exist in this arithmetic (negative or not a perfect square)")]
    InexactSqrt { value: String },

    #[error("value {value} has a nonzero imaginary part; this backend is real-only")]
    NotReal { value: String },

    #[error("gap {gap} exceeds the enumeration bound {max}")]
    EnumerationBound { gap: usize, max: usize },

    #[error("letter {letter} outside the alphabet 1..={n}")]
    BadLetter { letter: u8, n: usize },

    #[error("the empty word has no predecessor")]
    EmptyWordPred,

    #[error("empty alphabet: N must be at least 1")]
    EmptyAlphabet,

    #[error("series has zero constant term and is not invertible")]
    ZeroConstantTerm,

    #[error("{what} requires {needed} values but only {got} are available")]
    NotEnoughData {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("invalid {field}: {reason}")]
    InvalidArgument { field: &'static str, reason: String },
}

impl Error {
    /// True for errors caused by numerically impossible operations rather
    /// than malformed input. Used by the CLI to pick the exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotStrictlyPositive { .. }
                | Error::ZeroDiagonal { .. }
                | Error::InexactSqrt { .. }
                | Error::ZeroConstantTerm
        )
    }
}
