use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field configuration: {0}")]
    InvalidField(String),
    #[error("divisor is not monic")]
    NonMonicDivisor,
    #[error("element is not a unit")]
    NonUnit,
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bad reduction: the prime divides the leading coefficient e_r")]
    BadReduction,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("characteristic polynomial coefficient is not in F_q[t]: {0}")]
    CoefficientNotRational(String),
    #[error("coefficient degree bound violated: {0}")]
    DegreeBoundViolation(String),
    #[error("splitting field degree exceeds the cap of {cap}")]
    SplittingFieldTooLarge { cap: usize },
    #[error("insufficient moduli for reconstruction: {0}")]
    InsufficientModuli(String),
    #[error("cross-check mismatch: {0}")]
    OracleMismatch(String),

    #[error("wild ramification: p divides the inertia order {e}")]
    WildRamification { e: u64 },
    #[error("wild prime: the square of the prime divides the conductor")]
    WildPrime,
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("module is not free over F_q[G] (certified by exhaustive search)")]
    NotFree,
    #[error("no free basis found within the attempt budget (module probably not free)")]
    NotFreeProbably,
    #[error("presentation too large: {0}")]
    PresentationTooLarge(String),
    #[error("ambient rings differ")]
    AmbientMismatch,
}
