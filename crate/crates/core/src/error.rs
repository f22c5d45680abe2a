use thiserror::Error;

/// Errors raised by the electromechanical, FEM and profile models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gap must be positive, got {gap:e} m")]
    NonPositiveGap { gap: f64 },

    #[error("displacement {displacement:e} m closes the {gap:e} m gap")]
    GapClosed { displacement: f64, gap: f64 },

    #[error("pull-in: no stable equilibrium at {voltage} V")]
    PullIn { voltage: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("capacitance must be positive, got {capacitance:e} F")]
    NonPositiveCapacitance { capacitance: f64 },

    #[error("displacement {displacement:e} m exceeds dimple stop at {limit:e} m")]
    DimpleViolation { displacement: f64, limit: f64 },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("mesh needs at least 2 elements, got {0}")]
    TooFewElements(usize),

    #[error(
        "stiffness matrix is not positive definite (axial force {axial_force:e} N, \
         critical compressive load {critical_force:e} N)"
    )]
    SingularSystem { axial_force: f64, critical_force: f64 },

    #[error("mesh has no node at the beam centre {center:e} m")]
    MeshMisaligned { center: f64 },

    #[error("profile spans differ: {expected:e} m vs {found:e} m")]
    SpanMismatch { expected: f64, found: f64 },

    #[error("tri-layer process needs exactly 3 layers, got {0}")]
    WrongLayerCount(usize),

    #[error("malformed profile data at line {line}: {reason}")]
    ProfileFormat { line: usize, reason: String },
}

/// Coarse failure class, used by front ends to map errors onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Inputs violate a physical or geometric invariant.
    Domain,
    /// A solver failed (singular matrix, divergence, pull-in).
    Numerical,
    /// Input data could not be parsed.
    Format,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::PullIn { .. } | Error::NoConvergence { .. } | Error::SingularSystem { .. } => {
                ErrorKind::Numerical
            }
            Error::ProfileFormat { .. } => ErrorKind::Format,
            _ => ErrorKind::Domain,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
