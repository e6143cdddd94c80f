use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Variants tagged "bug" can only be produced by an internal arithmetic
/// inconsistency, never by valid input; they exist so such a bug surfaces as an
/// error instead of a silently wrong count.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field order {p}^{k} exceeds the configured maximum {max}")]
    Overflow { p: u64, k: u32, max: u64 },
    #[error("zero has no multiplicative inverse")]
    DivisionByZero,
    #[error("element {value} is not canonical for a field of order {q}")]
    NotCanonical { value: u64, q: u32 },
    #[error("order {0} is not a prime power congruent to 1 mod 4")]
    PaleyIneligible(u32),
    #[error("ring index {0} is not a valid distance")]
    InvalidRing(u8),
    #[error("vertices are not pairwise distinct")]
    NotDistinct,
    #[error("non-integral result: {numerator} is not divisible by {denominator} (bug)")]
    NonIntegral { numerator: i64, denominator: i64 },
    #[error("{0} and {1} are not adjacent")]
    NotAnEdge(u32, u32),
    #[error("{0} is not congruent to 1 mod 4")]
    NotOneModFour(u64),
    #[error("no two-squares decomposition found for {0} (bug)")]
    NoDecomposition(u64),
    #[error("order {0} is not of the form (4s+1)^2 with s >= 1")]
    NotSquareOrder(u32),
    #[error("partial character domain does not match the squares together with zero")]
    DomainMismatch,
    #[error("no element c with c, a-c and b+c all nonzero squares (a={a}, b={b})")]
    NotFound { a: u32, b: u32 },
    #[error("partial character does not extend to an additive character: {0}")]
    NotExtendable(String),
    #[error("partial character violates its defining conditions: {0}")]
    PreconditionViolated(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
