//! Shared error type for every fallible operation in the crate.

use crate::field::FieldKind;

/// Errors surfaced by construction, arithmetic and normalization routines.
///
/// `FieldExtensionRequired` is special: it flags inputs that are well-formed
/// but whose answer lives in a proper extension of the configured base field
/// (a missing square root, a p-th root of unity, an unsplit factor). Callers
/// that present results to a user should keep it distinct from plain input
/// errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operands live in different fields: {0} vs {1}")]
    KindMismatch(FieldKind, FieldKind),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a valid field description: {1}")]
    BadField(String, String),
    #[error("field characteristic is too small for this operation (needs 0 or > {needed})")]
    CharacteristicTooSmall { needed: u64 },
    #[error("polynomial is not self-reciprocal of even degree")]
    NotSelfReciprocal,
    #[error("rational function is not invariant under the required substitutions: {0}")]
    NotInvariant(String),
    #[error("element is not a p-th power")]
    NotAPower,
    #[error("cannot decide p-th power membership for this cyclotomic constant")]
    UndeterminedPower,
    #[error("requires a field extension: {0}")]
    FieldExtensionRequired(String),
    #[error("no primitive root of unity of order {order} in {kind}")]
    MissingRootOfUnity { order: u64, kind: FieldKind },
    #[error("matrix is scalar")]
    ScalarMatrix,
    #[error("projective order of input is not {0}")]
    WrongProjectiveOrder(u64),
    #[error("input is not a group of the required shape: {0}")]
    BadGroupShape(String),
    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("generator {index} does not have order {p}")]
    WrongOrder { index: usize, p: u64 },
    #[error("closure exceeded maximal rank {max_rank}")]
    ClosureExceeded { max_rank: u32 },
    #[error("norm of the input is not 1")]
    NormNotOne,
    #[error("values do not satisfy the cocycle identity")]
    NotACocycle,
    #[error("no nonzero resolvent found within candidate bound {0}")]
    ResolventBound(usize),
    #[error("map is not an involution")]
    NotInvolution,
    #[error("map does not have the required shape: {0}")]
    ShapeError(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
