use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: BigInt },

    #[error("D = {0} is not squarefree")]
    NotSquarefree(BigInt),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("Gram matrix entries must be integers: {0}")]
    NotIntegral(String),

    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("lattice is not well-rounded: reduced diagonal ({a}, {c}) differs")]
    NotWellRounded { a: BigInt, c: BigInt },

    #[error("classes have different types D = {0} and D = {1}")]
    MismatchedType(BigInt, BigInt),

    #[error("point ({x}, {y}) is not on the conic x^2 - {d}*y^2 = 1")]
    OffConic { x: String, y: String, d: BigInt },

    #[error("no IWR lattice has determinant {m}*sqrt({d})")]
    InadmissibleDeterminant { m: BigInt, d: BigInt },

    #[error("zeta evaluation: {0}")]
    Zeta(String),
}

impl Error {
    pub(crate) fn non_positive(what: &'static str, value: &BigInt) -> Self {
        Error::NonPositive {
            what,
            value: value.clone(),
        }
    }
}
