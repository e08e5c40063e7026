//! Test-prime sets and oracle-driven analysis of 2-dimensional 2-adic Galois
//! representations over Q and Q(i).

pub mod analysis;
pub mod arith;
pub mod cubic;
pub mod document;
pub mod error;
pub mod f2;
pub mod field;
pub mod gauss;
pub mod oracle;
pub mod selmer;
pub mod sets;

pub use error::{Error, Result};
pub use f2::{BitMatrix, BitVector};
pub use field::{canonical_primes, BaseField, Prime};
pub use gauss::GaussInt;
