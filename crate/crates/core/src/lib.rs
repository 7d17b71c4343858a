//! Exact computation of the mod-p Honda formal group law of Morava K-theory
//! K(s), `s > 1`, as a polynomial modulo `y^(q^n)` with `q = p^(s-1)`.
//!
//! The crate is layered: [`ring`] provides sparse polynomial arithmetic,
//! [`witt`] the integral Witt symmetric polynomials, [`engine`] the truncated
//! formal group law tower, [`oracle`] an independent construction through the
//! Honda logarithm, and [`chern`] the Chern class relations in
//! `F_p[u]/u^(p^(ks))`.

pub mod chern;
pub mod cli;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod ring;
pub mod witt;

pub use error::{FglError, Result};
