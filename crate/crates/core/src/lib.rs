//! High-precision evaluation of the Dedekind eta function and the Jacobi
//! theta constants by short addition sequences and a sparse baby-step
//! giant-step summation, with the number theory these rest on.

pub mod addseq;
pub mod arb;
pub mod arith;
pub mod bench;
pub mod bsgs;
pub mod cli;
mod error;
pub mod evaluator;
pub mod exponents;
pub mod modcount;
pub mod theorems;

pub use error::{Error, Result};
pub use exponents::ExponentKind;
