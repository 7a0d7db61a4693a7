use thiserror::Error;

/// Errors raised by the resolution engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("cycle in cover relations through `{0}`")]
    Cycle(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("`{0}` and `{1}` are not comparable")]
    Incomparable(String, String),

    #[error("set is not up-closed: `{below}` is in the set but `{above}` is not")]
    NotUpClosed { below: String, above: String },

    #[error("shape mismatch on {context}: expected {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    ShapeMismatch {
        context: String,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("sheaf maps do not commute on {lower} <= {middle} <= {upper}")]
    NotFunctorial {
        lower: String,
        middle: String,
        upper: String,
    },

    #[error("naturality fails on the cover {lower} < {upper}")]
    NotNatural { lower: String, upper: String },

    #[error("labeled matrix has a nonzero entry at row {row} (`{row_label}`) column {col} (`{col_label}`) but `{row_label}` is not below `{col_label}`")]
    SupportViolation {
        row: usize,
        col: usize,
        row_label: String,
        col_label: String,
    },

    #[error("map is not monotone: `{lower}` <= `{upper}` but images are not ordered")]
    NotMonotone { lower: String, upper: String },

    #[error("map is not induced by a simplicial map: {0}")]
    NotSimplicial(String),

    #[error("invalid resolution input: {0}")]
    InvalidResolution(String),

    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
