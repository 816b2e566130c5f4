//! Positional numeration in real bases `γ` with `|γ| > 1`.
//!
//! The crate builds greedy and optimal digit expansions in positive and
//! negative bases with canonical digit alphabets, checks Parry
//! admissibility, normalizes strings in confluent bases, and certifies or
//! refutes optimality of representations with an exhaustive prefix oracle.
//!
//! All arithmetic is exact for rational, quadratic and polynomial-root
//! bases, so branch boundaries of the piecewise maps are decided without
//! tolerances.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod confluent;
pub mod error;
pub mod expand;
pub mod interval;
pub mod numsys;
pub mod optimality;
pub mod poly;
pub mod realnum;
pub mod transforms;

pub use error::{Error, Result};
pub use interval::Interval;
pub use numsys::{BaseSign, Digit, DigitString, NumerationSystem, RepInterval, Tail};
pub use poly::Poly;
pub use realnum::Real;
