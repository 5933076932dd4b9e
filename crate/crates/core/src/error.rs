use thiserror::Error;

/// Errors raised by the series engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("context mismatch: matrix size {left} vs {right}")]
    ContextMismatch { left: usize, right: usize },

    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("element is not invertible (relative pivot {pivot:.3e})")]
    NotInvertible { pivot: f64 },

    #[error("constant term must vanish, found norm {norm:.3e}")]
    NonzeroConstantTerm { norm: f64 },

    #[error("linear term is singular (relative pivot {pivot:.3e})")]
    LinearTermSingular { pivot: f64 },

    #[error("series is not a left multiple of I (reconstruction deviation {deviation:.3e})")]
    NotLeftMultipleOfI { deviation: f64 },

    #[error("degree {degree} out of range for order {order}")]
    DegreeOutOfRange { degree: usize, order: usize },

    #[error("argument count {got} does not match arity {arity}")]
    ArityMismatch { arity: usize, got: usize },

    #[error("operation needs truncation order at least {needed}, got {order}")]
    OrderTooLow { needed: usize, order: usize },

    #[error("size {size} exceeds the limit {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },

    #[error("consistency check failed: {what} residual {residual:.3e}")]
    ConsistencyFailure { what: &'static str, residual: f64 },

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("expression error: {0}")]
    Expr(String),
}

pub type Result<T> = std::result::Result<T, Error>;
