use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported algebra: {0}")]
    Unsupported(String),

    #[error("{what} = {value} is outside the supported range {range}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("element is not in {subspace} (off-subspace norm {norm:.3e})")]
    NotInSubspace { subspace: &'static str, norm: f64 },

    /// The base point lies outside the open domain of the r-matrix.
    #[error("outside the r-matrix domain: {0}")]
    Domain(String),

    /// Non-regular input to a diagonalisation.
    #[error("degenerate input: eigenvalue gap {gap:.3e} is below {threshold:.1e}")]
    Degenerate { gap: f64, threshold: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Degenerate { .. })
    }
}

pub(crate) fn check_len(v: &nalgebra::DVector<f64>, dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: v.len(),
        });
    }
    Ok(())
}
