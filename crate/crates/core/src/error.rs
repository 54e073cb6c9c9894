use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix data has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds tolerance")]
    NotHermitian { asymmetry: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("bipartite dimensions {d_a}x{d_b} do not factor dimension {dim}")]
    BadBipartite { d_a: usize, d_b: usize, dim: usize },

    #[error("operation requires bipartite dimensions")]
    MissingBipartite,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("empty index set")]
    EmptyIndexSet,

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigenNoConvergence { sweeps: usize, off_norm: f64 },

    #[error("trace of product has imaginary part {0:e}")]
    ComplexTrace(f64),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("subsystem dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("state pair is not pure: |beta^2 - alpha(1 - alpha)| = {0:e}")]
    NotPure(f64),

    #[error("parameter {name} = {value} is outside its domain")]
    Domain { name: &'static str, value: f64 },

    #[error("pair is not perfectly distinguishable: alpha1 + alpha2 = {gamma} < 1")]
    NotDistinguishable { gamma: f64 },

    #[error("identical states (overlap {0}) can never be distinguished")]
    IdenticalStates(f64),

    #[error("{copies} copies per side do not satisfy 2 f^n <= 1 (f = {overlap})")]
    CopiesBelowThreshold { copies: u32, overlap: f64 },

    #[error("total dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("frame is not orthonormal (deviation {0:e})")]
    FrameNotOrthonormal(f64),

    #[error("effect {0} carries no decomposition certificate")]
    MissingCertificate(usize),

    #[error("T + Gamma(T) differs from the identity by {0:e}")]
    NotUnitDecomposition(f64),

    #[error("entry ({row}, {col}) violates the forced pattern by {deviation:e}")]
    PatternViolation { row: usize, col: usize, deviation: f64 },

    #[error("measurement does not discriminate the pair perfectly (max deviation {0:e})")]
    NotPerfect(f64),

    #[error("expected {expected} effects, got {got}")]
    EffectCount { expected: usize, got: usize },

    #[error("invalid JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
