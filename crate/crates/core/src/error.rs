use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("construction mismatch at step {step}, sigma {sigma}: {detail}")]
    ConstructionMismatch {
        step: usize,
        sigma: String,
        detail: String,
    },

    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
