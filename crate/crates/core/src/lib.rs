pub mod cli;
pub mod codes;
pub mod coloring;
pub mod covering;
pub mod error;
pub mod field_linalg;
pub mod graph;
pub mod lp;
pub mod minrank;
pub mod rational;
pub mod schemes;
pub mod tradeoff;

pub use error::{Error, Result};
