//! Fractional calculus with respect to a kernel function ψ.

pub mod catalog;
pub mod error;
pub mod expr;
pub mod operand;
pub mod operators;
pub mod oracles;
pub mod psi;
pub mod quad;
pub mod specialfn;
pub mod verify;

pub use error::{FracError, Result};
