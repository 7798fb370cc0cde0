use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("operator is not Hermitian (max |A - A^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("operator is not unitary (max |U^dag U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("invalid density matrix: {reason} ({value:e})")]
    InvalidDensityMatrix { reason: &'static str, value: f64 },
    #[error("Kraus operators are incomplete (|sum W^dag W - I| = {deficit:e})")]
    IncompleteChannel { deficit: f64 },
    #[error("projectors are not an orthogonal resolution of identity (deviation {deficit:e})")]
    IncompleteProjectors { deficit: f64 },
    #[error("Lindblad rate {index} is negative ({rate})")]
    NegativeRate { index: usize, rate: f64 },
    #[error("coefficient matrix is not positive (min eigenvalue {min_eigenvalue:e})")]
    NonPositiveCoefficients { min_eigenvalue: f64 },
    #[error("positivity violated at t = {time} (min eigenvalue {min_eigenvalue:e})")]
    PositivityViolated { time: f64, min_eigenvalue: f64 },
    #[error("trace drifted by {drift:e} at t = {time}")]
    TraceDrift { time: f64, drift: f64 },
    #[error("step became unstable at t = {time}")]
    Unstable { time: f64 },
    #[error("Fock truncation loses {loss:e} of the norm")]
    TruncationLoss { loss: f64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("quadrature did not converge: {reason}")]
    QuadratureNotConverged { reason: &'static str },
    #[error("grid too coarse: {points_per_width:.2} points across the packet width (need 8)")]
    GridTooCoarse { points_per_width: f64 },
    #[error("Wigner marginal mismatch {mismatch:e} indicates aliasing")]
    Aliasing { mismatch: f64 },
    #[error("operation requires Hermitian Lindblad operators (operator {index} is not)")]
    NonHermitianLindblad { index: usize },
    #[error("generator contains terms outside Lindblad form")]
    NotLindbladForm,
    #[error("undefined: {0}")]
    Undefined(&'static str),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
