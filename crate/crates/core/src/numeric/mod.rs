//! Numerical building blocks shared by the rest of the crate.

pub mod optimize;
pub mod quad;
pub mod roots;
mod sum;

pub use sum::{neumaier_sum, CompensatedSum};
