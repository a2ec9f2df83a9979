use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("both arguments are the same end; the confluent is undefined")]
    IdenticalEnds,

    #[error("radius {radius} exceeds the cap {cap}")]
    RadiusTooLarge { radius: u32, cap: u32 },

    #[error("trace {trace} <= 2: the matrix is not hyperbolic")]
    TraceTooSmall { trace: i64 },

    #[error("matrix determinant is {det}, expected 1")]
    NotUnimodular { det: i64 },

    #[error("lamplighter walks need p = q (got p = {p}, q = {q})")]
    ParamsNotSquare { p: u32, q: u32 },

    #[error("incidence violated: tree height {tree} vs plane height {plane}")]
    IncidenceViolation { tree: f64, plane: f64 },

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("digit {digit} out of range for p = {p}")]
    DigitOutOfRange { digit: u32, p: u32 },

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
}
