//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Lens parameters with fewer than two rotation angles describe a
    /// quotient of S^1; nothing below S^3 is supported.
    #[error("dimension below 3 unsupported (need at least 2 rotation parameters)")]
    DimensionTooSmall,

    /// t(q) needs phi(q) to be even, which fails for q in {1, 2}.
    #[error("unit representatives undefined for q = {0} (need q >= 3)")]
    UnitRepresentativesUndefined(u64),

    /// Irreducibility compares against t(q), so the same restriction applies.
    #[error("irreducibility undefined for q = {0} (need q >= 3)")]
    IrreducibilityUndefined(u64),

    /// The brute-force monomial oracle enumerates all exponent vectors; the
    /// guard keeps that enumeration within ~10^9 candidates.
    #[error("oracle budget exceeded: {0} monomials to enumerate")]
    OracleBudget(u128),

    /// floor(1/epsilon)! blows past any feasible computation.
    #[error("bound astronomically large: floor(1/epsilon) = {0} > 8")]
    BoundTooLarge(u64),

    /// Group closure exceeded the caller-provided cap.
    #[error("group too large: closure exceeded {0} elements")]
    GroupTooLarge(usize),

    #[error("precondition violation: {0}")]
    Precondition(String),

    #[error("malformed lens literal: {0}")]
    ParseLens(String),

    #[error("malformed group file: {0}")]
    ParseGroup(String),

    /// A consistency condition the mathematics guarantees was violated;
    /// always a bug.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
