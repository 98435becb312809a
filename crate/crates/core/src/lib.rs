//! Exact jet calculus over the Gaussian rationals.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact: scalars are
//! elements of `Q(i)` backed by big rationals, and formal exponential factors
//! `e^a` are kept symbolically.
//!
//! Layout:
//!
//! * [`scalar`]: `Q(i)` scalars and the formal exponential coefficient ring.
//! * [`linalg`]: dense matrices, row reduction and subspaces.
//! * [`poly`]: polynomials, exponential polynomials, differential operators,
//!   translation, the coproduct, and the text format.
//! * [`localmod`]: cofinite ideals and finite-dimensional modules over the
//!   local ring of germs at the origin.
//! * [`jetfun`]: the derivation functor `f -> f^(E)`, Delorme derivatives,
//!   duality with differential operators and the kernels of the coproduct maps.
//! * [`approxalg`]: approximately unital algebras and the double commutant.
//! * [`family`]: toy representation families, Arthur-Campoli data and the
//!   Paley-Wiener membership tests.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod approxalg;
mod error;
pub mod family;
pub mod jetfun;
pub mod linalg;
pub mod localmod;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace};
pub use poly::{Covector, DiffOp, ExpPoly, Monomial, Polynomial, Vector};
pub use scalar::{ExpScalar, Ring, Scalar};
