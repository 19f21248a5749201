//! Exact arithmetic for globally valued fields.
//!
//! The crate models places and valuations of a few concrete fields
//! (`Q`, `F_p(t)`, `Q(sqrt d)` and `Q(z)`), evaluates tropical lattice
//! divisors against them, and builds discrete GVF structures with heights,
//! local terms, functionals, measures and positivity certificates.

pub mod arith;
pub mod cli;
pub mod error;
pub mod field;
pub mod places;
pub mod positivity;
pub mod random;
pub mod structure;
pub mod tropical;

pub use error::{GvfError, Result};
