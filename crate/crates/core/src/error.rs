use num_bigint::BigInt;
use thiserror::Error;

use crate::digits::SearchStats;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("the zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial has the rational root {0}")]
    RationalRoot(BigInt),
    #[error("the root of largest modulus is not real")]
    NonRealDominant,
    #[error("the root of largest modulus is a negative real number")]
    NegativeDominant,
    #[error("the largest real root is not greater than 1")]
    DominantNotAboveOne,
    #[error("floor of the dominant root does not fit in 63 bits")]
    DominantTooLarge,
    #[error("root isolation did not certify within {0} bits")]
    PrecisionExhausted(u32),
    #[error("a nonzero coordinate vector vanishes at the dominant root; the polynomial is not irreducible")]
    NotMinimal,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("conjugate index {index} is outside 1..={degree}")]
    ConjugateIndex { index: usize, degree: usize },
    #[error("conjugate {0} is real")]
    RealConjugate(usize),
    #[error("level {level} needs about {needed} bytes, over the budget of {budget}")]
    MemoryBudget { level: usize, needed: u64, budget: u64 },
    #[error("coordinates at level {level} do not fit the packed 128-bit key")]
    CoordinateOverflow { level: usize },
    #[error("not a Perron number")]
    NotPerron,
    #[error("Perron status is undecided at the precision cap")]
    Undecided,
    #[error("witness search exhausted ({reason}) after {stats}")]
    SearchExhausted { reason: String, stats: SearchStats },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
