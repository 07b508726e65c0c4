//! Goodness-of-fit testing built on fixed-point characterizations of
//! continuous univariate laws.
//!
//! For a density `p` with score `p'/p`, the operator
//! `t ↦ E[-(p'/p)(X) (min{X, t} - L)]` (and its real-line and bounded-support
//! relatives) returns the distribution function of `X` exactly when `X ~ p`.
//! Comparing an empirical version of that operator with the empirical CDF
//! gives a family of weighted L² statistics; the Burr Type XII member has a
//! closed form and is calibrated with a parametric bootstrap.
//!
//! The crate is `no_std` (it needs `alloc`). The `parallel` feature pulls in
//! `std` and `rayon` to spread power-study replicates over a thread pool;
//! results do not depend on the thread count.

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod bootstrap;
pub mod characterization;
pub mod distributions;
pub mod error;
pub mod estimation;
pub mod gof;
pub mod numeric;
mod par;
pub mod rng;
pub mod sample;
pub mod simulation;
pub mod special;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use sample::{Sample, SortedSample};
