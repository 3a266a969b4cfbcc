use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{field}` must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },

    #[error("magnitude `{field}` must be non-negative, got {value}")]
    NegativeMagnitude { field: &'static str, value: f64 },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("matrix is not particle-hole symmetric: imaginary part {imag:e} of coefficient `{coefficient}` exceeds {tol:e}")]
    SymmetryViolation {
        coefficient: &'static str,
        imag: f64,
        tol: f64,
    },

    #[error("eigenvalue iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("echelon gauge unavailable: normalisation component of eigenvector {index} is ill-conditioned")]
    GaugeUnavailable { index: usize },

    #[error("parameters are off the requested locus: {0}")]
    OffLocus(String),

    #[error("coefficients do not match the supplied matrix: {0}")]
    InputMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no inverse found after {iterations} Newton iterations (residual {residual:e})")]
    NoInverseFound { iterations: usize, residual: f64 },

    #[error("inversion converged to a singular point (det J = {det:e})")]
    SingularMap {
        det: f64,
        point: crate::parammap::MapVariables,
    },

    #[error("parameters are not on the pseudo-Hermitian plane: {0}")]
    NotOnPhp(String),

    #[error("loop touches a degeneracy at phi = {phi} (eigenvalue gap {gap:e})")]
    LoopTouchesDegeneracy { phi: f64, gap: f64 },

    #[error(
        "strand continuation failed at phi = {phi}: jump {jump:e} exceeds a quarter of gap {gap:e}"
    )]
    Discontinuous { phi: f64, jump: f64, gap: f64 },

    #[error("ambiguous strand matching (cost gap {0:e})")]
    AmbiguousMatching(f64),

    #[error("strands do not close on themselves (matching cost {0:e})")]
    OpenStrands(f64),

    #[error("crossing pattern at phi = {phi} cannot be serialised into adjacent transpositions")]
    Resolution { phi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
