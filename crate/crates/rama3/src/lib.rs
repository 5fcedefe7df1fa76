//! High-precision construction, evaluation, and algebraic certification of
//! Ramanujan-type series of level 3 with negative convergence rate.

pub mod catalog;
pub mod elliptic;
pub mod error;
pub mod polyroot;
pub mod real;
pub mod series;
pub mod surd;

pub use error::{Error, Result};
pub use real::{BigReal, Modulus};
