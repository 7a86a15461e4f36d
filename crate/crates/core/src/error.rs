use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed ideal: block index {index} out of range for {blocks} blocks")]
    MalformedIdeal { index: usize, blocks: usize },

    #[error("ideals do not cover the algebra; uncovered blocks {uncovered:?}")]
    NoDecomposition { uncovered: Vec<usize> },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("representation is degenerate: {0}")]
    Degenerate(String),

    #[error("invalid intertwiner: defect {defect:.3e} exceeds {tol:.1e}")]
    InvalidIntertwiner { defect: f64, tol: f64 },

    #[error("identification error: {0}")]
    Identification(String),

    #[error("parameter t = {0} outside [0, pi/2]")]
    TOutOfRange(f64),

    #[error("grading error: {0}")]
    Grading(String),

    #[error("operator is not odd: |gamma D + D gamma| = {0:.3e}")]
    NotOdd(f64),

    #[error("ambiguous kernel in {operator}: best gap ratio {ratio:.3} below required {required}")]
    AmbiguousKernel {
        operator: String,
        ratio: f64,
        required: f64,
    },

    #[error("eigensolver failed: {0}")]
    Eigensolve(String),

    #[error("lattice too coarse: {sites} sites (minimum 16)")]
    TooCoarse { sites: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error(transparent)]
    Symbolic(#[from] crate::symbolic::SymbolicError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Prefixes the operator name of an ambiguous-kernel error.
    pub fn in_operator(self, name: &str) -> Self {
        match self {
            Error::AmbiguousKernel {
                operator,
                ratio,
                required,
            } => Error::AmbiguousKernel {
                operator: format!("{name}: {operator}"),
                ratio,
                required,
            },
            other => other,
        }
    }
}
