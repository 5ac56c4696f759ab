//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("layout mismatch: expected total dimension {expected}, got {found}")]
    LayoutMismatch { expected: usize, found: usize },

    #[error("invalid site subset: {0}")]
    InvalidSubset(String),

    #[error("invalid site permutation: {0}")]
    InvalidPermutation(String),

    #[error("matrix is not Hermitian (max |m - m†| = {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("state vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("not a valid density matrix: {0}")]
    NotDensity(String),

    #[error("dimension bound violated: {0}")]
    DimensionBound(String),

    #[error("code is not correctable for this subset: {0}")]
    NotCorrectable(String),

    #[error("codeword Schmidt ranks are inconsistent across the code basis: {0}")]
    DegenerateCodeword(String),

    #[error("code validation failed: {0}")]
    Validation(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid Pauli string: {0}")]
    PauliParse(String),

    #[error("invalid stabilizer group: {0}")]
    InvalidStabilizer(String),

    #[error("enumeration guard exceeded: {size} sites requested, limit is {max}")]
    EnumerationGuard { size: usize, max: usize },
}
