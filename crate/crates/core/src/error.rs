use thiserror::Error;

/// Errors raised across the calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element {0} is not invertible (squared modulus {1} <= 0)")]
    NotInvertible(String, f64),

    #[error("element {0} has no polar form (squared modulus {1} <= 0)")]
    NoPolarForm(String, f64),

    #[error("hyperbolic phase {0} exceeds the representable range |theta| <= 700")]
    PhaseOverflow(f64),

    #[error("degenerate probability: {0}")]
    DegenerateProbability(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("nonphysical result: q = {0:?} leaves [0, 1]")]
    NonphysicalResult(Vec<f64>),

    #[error("orthogonality violated: |lambda_1 + K lambda_2| = {residual:e} > {tol:e}")]
    OrthogonalityViolated { residual: f64, tol: f64 },

    #[error("context {0} received no elements; increase the ensemble size")]
    EmptyContext(usize),

    #[error("interference coefficient for outcome {0} is undefined (m_1j * m_2j = 0)")]
    UndefinedCoefficient(usize),

    #[error("shift {0} moves a disturbed probability out of (0, 1)")]
    InvalidShift(f64),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("state is not decomposable: squared norms sum to {0}")]
    NotDecomposable(f64),

    #[error("nonphysical state: squared moduli {0:?} include a negative value")]
    NonphysicalState([f64; 2]),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("transition matrix is singular")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;
