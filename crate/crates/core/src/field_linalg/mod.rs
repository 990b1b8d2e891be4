//! Exact linear algebra over prime fields.

mod field;
mod matrix;

pub use field::{is_prime, next_prime_at_least, Field};
pub use matrix::{hamming_weight, GfMatrix};
