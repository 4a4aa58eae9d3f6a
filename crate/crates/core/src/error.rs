use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("transform length v = {v} is smaller than tubal length p = {p}")]
    TransformTooShort { v: usize, p: usize },

    #[error("imaginary residue {residue:e} exceeds tolerance {tol:e} in {op}")]
    ImaginaryResidue {
        op: &'static str,
        residue: f64,
        tol: f64,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("decomposition did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid observation mask: {0}")]
    InvalidMask(String),

    #[error("ill-conditioned {op} at spectral slice {slice}: {detail}")]
    IllConditioned {
        op: &'static str,
        slice: usize,
        detail: String,
    },

    #[error("solver aborted at iteration {iteration}: {reason}\n{dump}")]
    SolverAbort {
        iteration: usize,
        reason: String,
        dump: String,
    },

    #[error("truncated product identity violated: max deviation {max_deviation:e} > {tol:e}")]
    IdentityViolated { max_deviation: f64, tol: f64 },
}

pub(crate) fn mismatch(op: &'static str, detail: impl Into<String>) -> Error {
    Error::DimensionMismatch {
        op,
        detail: detail.into(),
    }
}
