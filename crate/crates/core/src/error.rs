use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("not a p-adic integer: {0} divides a denominator")]
    NotPadicInteger(u64),
    #[error("ramified case unsupported: {p} divides {d}")]
    Ramified { d: BigInt, p: u64 },
    #[error("not a starting root: {b0}^2 is not {d} mod {p}")]
    NotStartingRoot { d: BigInt, p: u64, b0: u64 },
    #[error("d = {0} must be a nonsquare integer >= 2")]
    SquareOrSmall(BigInt),
    #[error("z must be nonzero")]
    ZeroZ,
    #[error("z = {0} must be positive for real convergence")]
    NonPositiveZ(BigInt),
    #[error("Q_{0} undefined at this index (D_n = 0)")]
    RedeiUndefined(u64),
    #[error("convergent undefined at n = {0}")]
    ConvergentUndefined(usize),
    #[error("derivative vanishes at step {0}")]
    DerivativeVanishes(usize),
    #[error("√d ∉ ℚ_p: {d} is not a square mod {p}")]
    NonResidue { d: BigInt, p: u64 },
    #[error("√d lies in the field: {d} is a square mod {p}")]
    ResidueInField { d: BigInt, p: u64 },
    #[error("series division by a series with zero constant term")]
    SeriesNotUnit,
    #[error("series order {0} exceeds the cap of {max}", max = crate::approx::MAX_SERIES_ORDER)]
    SeriesOrder(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// True for failures that indicate an arithmetic bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}
