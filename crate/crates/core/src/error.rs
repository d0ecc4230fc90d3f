use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree-of-freedom mismatch: {left} vs {right}")]
    DofMismatch { left: usize, right: usize },

    #[error("degree-of-freedom index {index} out of range for {dof} degrees of freedom")]
    DofIndexOutOfRange { index: usize, dof: usize },

    /// A `1/hbar` survived where the theory guarantees cancellation.
    #[error("non-cancelling hbar power {0} in a final result")]
    NegativeHbarPower(i32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
