use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("degenerate symbol: |w2| = {0} (the imaginary part of zeta must be nonzero)")]
    DegenerateSymbol(f64),

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error(
        "contraction not guaranteed: |Im zeta| = {im_zeta:.6} < required {required:.6} on the lattice"
    )]
    ContractionNotGuaranteed { im_zeta: f64, required: f64 },

    #[error("Neumann iteration did not converge in {iterations} iterations (last gap {gap:.3e})")]
    IterationLimit { iterations: usize, gap: f64 },

    #[error("certified remainder bound violated: |r| = {norm:.6e} > {bound:.6e}")]
    BoundViolated { norm: f64, bound: f64 },

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    #[error("insufficient padding: support is {margin:.4} from the grid edge, need at least {tau:.4}")]
    InsufficientPadding { margin: f64, tau: f64 },

    #[error("non-uniform sampling: {0}")]
    NonUniformSampling(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("field file format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Format(_) | Error::Io(_) => 2,
            Error::IterationLimit { .. } | Error::BoundViolated { .. } => 4,
            _ => 3,
        }
    }
}
