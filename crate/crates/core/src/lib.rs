//! Exact Collatz dynamics and the machinery around its inverse tree.
//!
//! The crate is split by concern:
//!
//! * [`collatz`] forward stepping, odd-to-odd compression, trajectories and
//!   chain products over exact rationals.
//! * [`inverse`] the odd predecessor recurrence `n1 = (2^x n2 - 1) / 3`, the
//!   residue-class partition of odd numbers, predecessor tables and a bounded
//!   breadth-first expansion of the inverse tree.
//! * [`counting`] closed forms for how many odd numbers the predecessor rows
//!   generate below `N = (4^k - 1) / 3`, with term-by-term cross-checks.
//! * [`range`] the range recurrence `N_i -> N_{i+1}` built on the two
//!   residue-class maxima.
//! * [`verify`] brute-force oracles: sharded forward sweeps, cycle scans,
//!   trajectory tables and formula-vs-enumeration checks.
//! * [`cli`] the `collatz-kit` command line front end.

pub mod cli;
pub mod collatz;
pub mod counting;
mod error;
pub mod inverse;
mod num;
pub mod range;
pub mod verify;

pub use error::{Error, Result};
pub use num::{decimal, PosInt};
