//! Certified computations on the Galois towers of iterates of quadratic
//! polynomials `(x - gamma)^2 + c` over the rational function field Q(t).

pub mod arith;
pub mod error;

pub use error::{Error, Result};
pub mod bounds;
pub mod cli;
pub mod dynamics;
pub mod stability;
pub mod tower;
