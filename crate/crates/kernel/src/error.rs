use thiserror::Error;

/// Kernel-wide error type. Validation problems (pentagon failures, axiom
/// violations) are not errors: they are entries in a report. Errors are
/// reserved for conditions that make a computation impossible.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("minimal polynomial is not monic")]
    NotMonic,
    #[error("minimal polynomial is reducible over Q: {0}")]
    Reducible(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("algebra does not split over the base field: {0}")]
    NonSplit(String),
    #[error("object is not a generator: {0}")]
    NotGenerator(String),
    #[error("category is decomposable: {0}")]
    Decomposable(String),
    #[error("central structure is not closed: {0}")]
    NotClosed(String),
    #[error("braided category is degenerate: {0}")]
    Degenerate(String),
    #[error("no fusion-ring isomorphism found: {0}")]
    IsomorphismSearchExhausted(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("root search incomplete over this field: {0}")]
    RootSearchIncomplete(String),
    #[error("unsupported computation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
