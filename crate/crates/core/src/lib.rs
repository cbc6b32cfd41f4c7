//! Exact computations with the correlation-function co-operad, homogeneous flat
//! connections on configuration spaces, Knizhnik–Zamolodchikov connections, and
//! executable checks of tree-functor and tree-algebra axioms.
//!
//! Algebraic data is exact (arbitrary-precision rationals). Floating point is
//! confined to [`monodromy`].

pub mod axioms;
pub mod cli;
pub mod connection;
pub mod conventions;
pub mod cooperad;
pub mod error;
pub mod factored;
pub mod kz;
pub mod lie;
pub mod matrix;
pub mod monodromy;
pub mod poly;
pub mod rational;
pub mod ratfunc;
pub mod tree;

pub use error::{Error, Result};
pub use rational::Q;
pub use ratfunc::{OneForm, RatFunc};
