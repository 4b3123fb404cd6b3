//! Exact arithmetic over Gaussian rationals and exact matrix algebra.
//!
//! Scalars are complex numbers with arbitrary-precision rational real and
//! imaginary parts, so rank and determinant questions about integer or
//! rational matrices are decided with no tolerance at all. The matrix side
//! uses fraction-free (Bareiss) elimination, which keeps intermediate values
//! integral when the input is integral.

mod matrix;
mod scalar;

pub use matrix::{det_c, det_c_closed_form, tridiagonal_c, ExactMatrix};
pub use scalar::{ExactScalar, Rational};

use thiserror::Error;

/// Errors from exact scalar and matrix operations.
#[derive(Debug, Error)]
pub enum ExactError {
    #[error("matrix dimensions must be positive (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("a {rows}x{cols} matrix needs {expected} entries, got {got}")]
    EntryCountMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("bad index set: {0}")]
    BadIndexSet(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse {input:?} as an exact scalar: {reason}")]
    Parse { input: String, reason: String },
}
