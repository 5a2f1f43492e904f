use thiserror::Error;

/// Errors raised by the separability toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("parameter {name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("{0}")]
    Unsupported(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("{count} sign changes of the conditional entropy at q = {q}; bracket does not isolate a root")]
    MultipleRoots { q: f64, count: usize },

    #[error("threshold curve increases between q = {q_prev} (x* = {x_prev}) and q = {q_next} (x* = {x_next})")]
    NonMonotonic {
        q_prev: f64,
        x_prev: f64,
        q_next: f64,
        x_next: f64,
    },

    #[error("q grid must be sorted ascending")]
    UnsortedGrid,

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
