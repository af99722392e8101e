//! Exact counting and mean-value asymptotics for the Diophantine equation
//! `axy - x - y = n`.
//!
//! The crate is split along the lines of the computation:
//!
//! - [`arithmetic`]: 64-bit factorization, multiplicative functions, residue counts.
//! - [`special`]: digamma, the Euler constant, compensated summation.
//! - [`characters`]: Dirichlet characters modulo `a` and `L(1, chi)`.
//! - [`counting`]: `R_a(n)` and `S_a(N)` by three independent routes.
//! - [`meanvalue`]: the main term `(1/a)(N ln N - C(a) N)`, the remainder, and
//!   numerical checks of the identities behind it.

pub mod arithmetic;
pub mod characters;
pub mod counting;
mod error;
pub mod meanvalue;
pub mod special;

pub use error::{Error, Result};
