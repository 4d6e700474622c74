//! Exact verification of the monochromatic triangle bound for tripartite
//! colorings of complete graphs, with independent oracles for every
//! auxiliary formula.

pub mod admissible;
pub mod driver;
pub mod emptiness;
pub mod error;
pub mod fmin;
pub mod highk;
pub mod numbers;
pub mod oracle;
pub mod smallcases;

pub use error::{Error, Result};

/// Exact rational used outside the hot enumeration loops.
pub type Q = num_rational::Ratio<i128>;
