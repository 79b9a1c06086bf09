//! Structure-preserving strong l-ifications of square matrix polynomials in
//! the monomial basis, with exact verification of every claim made about
//! them: recovery of the original polynomial, strongness via unimodular
//! equivalence, minimal-index shifts, block-sparsity bounds, and the
//! nonexistence of structured companion quadratifications for quartics.
//!
//! Everything verification-grade runs over exact rationals or Gaussian
//! rationals; a float scalar backend exists for sampling-style checks only.

pub mod block;
pub mod conditions;
pub mod demos;
pub mod error;
pub mod json;
pub mod lification;
pub mod matpoly;
pub mod matrix;
pub mod minbases;
pub mod mobius;
pub mod plans;
pub mod poly;
pub mod refuter;
pub mod scalar;
pub mod smith;
pub mod structure;
pub mod verify;

#[doc(hidden)]
pub mod testkit;

pub use block::{Atom, BlockPolynomial, Labels, SlotLabel};
pub use error::{Error, Result};
pub use matpoly::{MatrixPolynomial, StarFlavor};
pub use matrix::Matrix;
pub use mobius::{cayley, mobius, CayleySide, MobiusMatrix};
pub use poly::SPoly;
pub use scalar::{parse_scalar, scalar_arith, ArithOp, Backend, Scalar};
pub use structure::{ConditionKind, NamedMobius, Sign, StructureKind, StructureTag};
