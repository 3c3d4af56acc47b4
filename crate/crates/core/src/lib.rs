//! Exact algebra for elementary abelian symmetry groups of the projective
//! line fibered over a base curve: base fields, univariate polynomials and
//! rational functions, Moebius transformations, semidirect-product
//! normalization, conjugacy invariants is built up layer by layer.

pub mod birmap;
pub mod conjclass;
pub mod delpezzo;
pub mod error;
pub mod field;
pub mod intfactor;
pub mod moebius;
pub mod poly;
pub mod ratfunc;
pub mod selfcheck;
pub mod semidirect;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldKind, Scalar};
pub use poly::Poly;
pub use ratfunc::{KElem, RatFunc};
