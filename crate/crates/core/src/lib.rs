//! Deciding when `ax^p + by^p + cz^p = 0` has only trivial solutions for all
//! large primes `p`.
//!
//! The pipeline reduces a coefficient triple, through the Frey curve of a
//! putative solution, to a short list of S-unit equations `2^r X + Y + Z = 0`
//! and then looks for congruence certificates proving those equations have
//! no proper points. Every certificate kind is cross-checked against a
//! bounded exhaustive enumerator in the test suites.

pub mod cli;
pub mod criteria;
pub mod expdioph;
pub mod fkm;
pub mod frey;
pub mod ntkernel;
pub mod serde_zint;
pub mod sieves;
pub mod sunit;
pub mod terns;

pub use criteria::{check_af, explain, Mode, Verdict, VerdictKind};
pub use ntkernel::{SSet, Zint};
pub use terns::Tern;

/// Version tag carried by every structured record.
pub const SCHEMA_VERSION: &str = "afcert/1";
