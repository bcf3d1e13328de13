//! Exact computer algebra for singular foliations given by polynomial vector
//! fields on affine space, and for the D-module invariants attached to them.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`], [`monomial`], [`poly`], [`expr`]: Gaussian-rational
//!   polynomials, monomial orders and the expression grammar.
//! - [`groebner`]: reduced Gröbner bases, ideal and module membership,
//!   dimension, syzygies.
//! - [`weyl`]: the Weyl algebra, principal symbols and Bernstein filtration.
//! - [`foliation`]: vector-field modules, Lie closure, orthogonal 1-forms,
//!   rank profile and stratification.
//! - [`dmod`]: characteristic variety, Koszul evidence, truncated
//!   cohomology of `RHom(M, M)` and the D-irregularity.

pub mod dmod;
pub mod error;
pub mod expr;
pub mod foliation;
pub mod groebner;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod scalar;
pub mod weyl;

pub use error::{Error, Result};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{vars, Poly, PolyVector, Vars};
pub use scalar::GaussianRational;
pub use weyl::{SymbolPoly, WeylOp};
