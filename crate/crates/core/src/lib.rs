//! Exact total-activity series of the single-seeded Rule 150 elementary
//! cellular automaton.
//!
//! The activity `X(t)` (number of live cells in row `t`) is available through
//! three independent routes:
//!
//! * [`replication`]: a Fibonacci-like string-doubling iteration, linear in the
//!   number of values produced;
//! * [`spin`]: a closed-form product over the runs of 1-bits in `t`;
//! * [`eca`]: direct simulation of the lattice (plus a polynomial row oracle).
//!
//! [`blocks`] covers the dyadic block sums and the detrended signal,
//! [`verify`] cross-checks the three routes, and [`bench`] measures how their
//! running time scales.

pub mod bench;
pub mod blocks;
pub mod eca;
mod error;
pub mod method;
pub mod replication;
pub mod spin;
pub mod verify;

pub use error::{Error, Result, RuleError};
pub use method::Method;
