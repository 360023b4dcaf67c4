//! Exact tools for base-p expansions and the p-adic Littlewood conjecture.
//!
//! The crate generates morphic words, finds the repetitions that force good
//! rational approximations of `p^k x`, turns them into certificates that can
//! be checked from digits alone, and implements the Thue–Morse decomposition
//! and binary pure morphic classification machinery.
//!
//! All numeric values are exact: integers are [`num_bigint::BigUint`] and
//! rationals are [`BigRational`].

pub mod arithmetic;
pub mod cf;
pub mod classify;
mod error;
pub mod repetitions;
pub mod tm;
pub mod witness;
pub mod words;

pub use arithmetic::BigRational;
pub use error::{Error, Result};
pub use repetitions::{ComplementSquare, OverlapOccurrence, RepetitionOccurrence};
pub use witness::{CertificateKind, PlcCertificate};
pub use words::{Alphabet, Morphism, Word, WordStream};
