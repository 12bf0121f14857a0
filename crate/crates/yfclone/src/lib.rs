//! Young–Fibonacci lattice, biserial clone Schur functions and the
//! combinatorics and random models built on them.
//!
//! Exact identities run over [`Q`] (arbitrary-precision rationals);
//! asymptotics and sampling run over `f64`.

pub mod cauchy;
pub mod clone;
pub mod error;
pub mod measures;
pub mod moments;
pub mod partitions;
pub mod poly;
pub mod rs;
pub mod scalar;
pub mod specs;
pub mod words;

pub use error::{Error, Result};
pub use scalar::{q, qi, Ring, Scalar, Q};
pub use specs::{Specialization, Xy};
pub use words::FibWord;
