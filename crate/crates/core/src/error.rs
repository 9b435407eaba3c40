use thiserror::Error;

/// Errors raised by the numerics and relation checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| entry = {0:e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    ConvergenceFailure(usize),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace differs from 1 by {0:e}")]
    TraceNotOne(f64),

    #[error("negative matrix exponent {0}")]
    NegativeExponent(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("empty matrix list")]
    EmptyList,

    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("numerical failure: {quantity} = {value:e} should be nonnegative")]
    NumericalFailure { quantity: &'static str, value: f64 },

    #[error("cross-check failed for {quantity}: {first:e} vs {second:e}")]
    CrossCheck {
        quantity: &'static str,
        first: f64,
        second: f64,
    },

    #[error("Tr(rho [A,B]) has real part {0:e}; operators are not Hermitian")]
    NonImaginaryResult(f64),

    #[error("golden mismatch on {field}: expected {expected}, got {got}")]
    GoldenMismatch {
        field: String,
        expected: f64,
        got: f64,
    },

    #[error("invalid matrix JSON: {0}")]
    Parse(String),

    #[error("invalid sampling spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
