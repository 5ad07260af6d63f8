use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate wire name `{0}`")]
    DuplicateWire(String),

    #[error("unknown wire `{0}`")]
    UnknownWire(String),

    #[error("wire `{name}` has dimension {dim}; every wire needs dimension >= 2")]
    InvalidDimension { name: String, dim: usize },

    #[error("matrix side {actual} does not match wire dimension product {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{0:?} is not a permutation of the operator's wires")]
    NotAPermutation(Vec<String>),

    #[error("operator is not Hermitian (max |M - M^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max |U^dag U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("vectors do not form an orthonormal set (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("not a density operator: {0}")]
    NotAState(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("instrument has no outcomes")]
    EmptyInstrument,

    #[error("invalid instrument: {0}")]
    InvalidInstrument(String),

    #[error("input {index} out of range 0..{bound}")]
    OutOfRange { index: usize, bound: usize },

    #[error("unknown token `{0}`")]
    UnknownToken(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duality violated: source {source_value} vs target {target_value}")]
    DualityViolation {
        source_value: f64,
        target_value: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
