//! Exact-arithmetic computations in the unitriangular group `UT(n, F_q)`:
//! coadjoint orbits, conjugacy classes and irreducible characters via the
//! orbit method, with closed-form evaluation of regular and subregular
//! characters cross-checked against brute-force oracles.
//!
//! Conventions used throughout:
//!
//! * group and Lie-algebra elements are strictly *lower* triangular
//!   (unit diagonal for the group side);
//! * linear forms on the algebra are strictly *upper* triangular, paired by
//!   `f(x) = sum over i > j of f[j,i] * x[i,j]`;
//! * a "root" is a pair `(i, j)` with `1 <= j < i <= n` indexing the lower
//!   triangle, and the entry of a form attached to root `(i, j)` is its
//!   `(j, i)` matrix coefficient.
//!
//! All character values live in `Z[zeta_p]` scaled by powers of `q`; nothing
//! in this crate touches floating point.

pub mod characters;
pub mod classes;
pub mod codec;
pub mod cyclo;
pub mod field;
pub mod matrix;
pub mod orbits;
pub mod roots;
pub mod verify;

pub use cyclo::CycloValue;
pub use field::{Field, Fq};
pub use matrix::{LinearForm, NilpotentMatrix, UnipotentMatrix};
pub use roots::{DecoratedSubset, Root, SubsetKind};

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("decorated subset has the wrong kind: {0}")]
    WrongKind(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no canonical form found: {0}")]
    NoCanonicalForm(String),
    #[error("character route unavailable: {0}")]
    RouteUnavailable(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
