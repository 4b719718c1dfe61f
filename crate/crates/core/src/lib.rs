//! Hereditarily finite sets with a computable ternary relation `S`, and a
//! stage-by-stage model construction over Henkin constants.

pub mod approx;
pub mod construction;
pub mod error;
pub mod fol;
pub mod hf;
pub mod srel;
pub mod structures;
pub mod suites;

pub use error::{Error, ParseError, Result};
