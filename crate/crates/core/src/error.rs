use core::fmt;

/// Errors raised by metric evaluation, fiber quadrature, assembly and the
/// eigensolvers.
#[derive(Clone, Debug, PartialEq)]
pub enum FinslerError {
    /// The metric is not a Finsler metric at the given point: `g` is not
    /// positive-definite, or a Randers form has `‖ρ‖_{g*} ≥ 1`.
    IllPosedMetric { x: f64, y: f64, reason: &'static str },
    /// The zero vector (or covector) was passed where a direction is needed.
    ZeroVector,
    /// Fiber quadrature produced a non-SPD symbol; the fiber is under-resolved.
    QuadratureFailure { nodes: usize },
    /// Parameter outside its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
    /// Grid or field dimensions are inconsistent.
    Shape { expected: usize, found: usize },
    /// Assembled stiffness matrix is not symmetric.
    Asymmetric { deviation: f64 },
    /// Iterative eigensolver did not reach the residual tolerance.
    NoConvergence { cycles: usize, converged: usize, wanted: usize, worst_residual: f64 },
    /// Rayleigh quotient of the zero function.
    ZeroFunction,
}

pub type Result<T> = core::result::Result<T, FinslerError>;

impl fmt::Display for FinslerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinslerError::IllPosedMetric { x, y, reason } => {
                write!(f, "ill-posed metric at ({x}, {y}): {reason}")
            }
            FinslerError::ZeroVector => write!(f, "zero vector has no direction"),
            FinslerError::QuadratureFailure { nodes } => write!(
                f,
                "fiber quadrature with {nodes} nodes produced a non-SPD symbol; raise the node count"
            ),
            FinslerError::InvalidParameter { name, value } => {
                write!(f, "parameter `{name}` = {value} is out of range")
            }
            FinslerError::Shape { expected, found } => {
                write!(f, "shape mismatch: expected {expected} entries, found {found}")
            }
            FinslerError::Asymmetric { deviation } => {
                write!(f, "stiffness matrix is not symmetric (max deviation {deviation:e})")
            }
            FinslerError::NoConvergence { cycles, converged, wanted, worst_residual } => write!(
                f,
                "eigensolver stopped after {cycles} cycles with {converged}/{wanted} pairs converged \
                 (worst relative residual {worst_residual:e})"
            ),
            FinslerError::ZeroFunction => write!(f, "Rayleigh quotient of the zero function"),
        }
    }
}

impl core::error::Error for FinslerError {}
