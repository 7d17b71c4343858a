//! Exact sparse multivariate polynomial arithmetic.

pub mod domain;
pub mod format;
pub mod monomial;
pub mod poly;
pub mod symmetric;
pub mod truncation;

pub use domain::{CoefficientMap, CoefficientRing, Domain, Integers, PrimeField, Rationals};
pub use format::{AnyPoly, PolyJson, TermJson};
pub use monomial::Monomial;
pub use poly::{vars, SparsePoly, Vars};
pub use symmetric::{elementary_symmetric, elementary_symmetric_all};
pub use truncation::TruncationPolicy;
