//! Exact truncated Chern and Segre calculus on marked stratification trees,
//! weighted simplex moments, lattice sums, and seeded Monte-Carlo checks of
//! the simplex estimates behind jet-differential bounds.
//!
//! All scalars are exact rationals ([`Rational`]); floating point appears only
//! in Monte-Carlo estimates.

pub mod arith;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod mc;
pub mod ring;
pub mod segre;
pub mod simplex;
pub mod strat;
pub mod upsilon;

pub use arith::Rational;
pub use error::{Error, Result};
