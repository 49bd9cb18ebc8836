use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: every factor must have dimension >= 2")]
    InvalidDimension(usize),

    #[error("slot {slot} out of range for a space with {factors} factors")]
    SlotOutOfRange { slot: usize, factors: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands live on different spaces: {left:?} vs {right:?}")]
    SpaceMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("unphysical regime: {0}")]
    UnphysicalRegime(String),

    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    #[error("squeezing undefined: (Delta_m - 2 K_s)/(Delta_m + 2 K_s) = {0} is not positive")]
    SqueezingUndefined(f64),

    #[error("criticality undefined: Delta_c * Delta_s = {0} is negative")]
    UndefinedCriticality(f64),

    #[error("degenerate detuning: Delta_c == Delta_s leaves the mixing angle undefined")]
    DegenerateDetuning,

    #[error("unstable lower polariton: omega_minus^2 = {0:e} <= 0")]
    UnstablePolariton(f64),

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("not in the dispersive regime: |Delta_nv - omega_minus| / g_r = {ratio} < {required}")]
    NotDispersive { ratio: f64, required: f64 },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("integrator failed: {0}")]
    ToleranceFailure(String),

    #[error("positivity violated at t = {time:e} s: minimum eigenvalue {min_eigenvalue:e}")]
    PositivityViolation { time: f64, min_eigenvalue: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by the numerics (instability, tolerance)
    /// rather than by invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::UnstablePolariton(_)
                | Error::SqueezingUndefined(_)
                | Error::UndefinedCriticality(_)
                | Error::ToleranceFailure(_)
                | Error::PositivityViolation { .. }
                | Error::NotDispersive { .. }
                | Error::NotHermitian(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
