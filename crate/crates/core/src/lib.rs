//! Coherent states on the Grassmannian `U(4)/U(2)^2` and on the Bloch sphere.
//!
//! The crate provides the isospin-`λ` basis polynomials and their Bergmann
//! kernel, coherent-state vectors and overlaps, Husimi functions, the `U(4)`
//! generators both as differential operators and as exact matrices, operator
//! symbols and bilayer order parameters, integration against the invariant
//! measures, and Wehrl entropy / Husimi second-moment estimators together with
//! a variational search for states of low entropy.
//!
//! Data-parallel loops (Monte Carlo chunks, quadrature rows, optimizer starts)
//! run on rayon when the `parallel` feature is enabled (the default) and fall
//! back to plain iterators otherwise. Results are identical either way: random
//! streams are keyed by chunk index and reductions run in chunk order.

pub mod cache;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod grassmann;
pub mod integration;
pub mod operators;
pub mod optim;
pub mod poly;
pub mod quadrature;
pub mod su2;

mod combinatorics;

pub use error::{Error, Result};
pub use exec::Execution;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// A 2×2 complex matrix.
pub type Mat2 = nalgebra::Matrix2<C64>;
