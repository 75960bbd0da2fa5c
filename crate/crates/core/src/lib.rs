//! Run-length-limited subcodes of Reed-Muller codes.
//!
//! The crate builds RM(m, r) under lexicographic point order, carves out the
//! `(d, ∞)`-constrained product subcode, decodes bit-wise MAP over binary
//! memoryless symmetric channels, and evaluates the rate bounds that go with
//! the construction. Everything here is `no_std` with `alloc`; file formats,
//! parallel sweeps and the command line live in the `rmrll` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod channel;
pub mod decode;
pub mod error;
pub mod gf2;
pub mod math;
pub mod rll;
pub mod rm;
pub mod subcode;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use rll::RllConstraint;
pub use rm::RMCode;
