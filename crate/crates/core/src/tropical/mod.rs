//! Tropical terms, their normal forms and lattice divisors.

pub mod divisor;
pub mod normal;
pub mod term;

pub use divisor::{divisor_from_term, ev_pair, is_zero, GroupElem, LatticeDivisor};
pub(crate) use divisor::require_decidable;
pub use normal::{to_normal_form, LinearForm, NormalForm};
pub use term::{parse_tropical, Term, TropicalValue};
