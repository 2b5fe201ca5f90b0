//! Exclude distributions of Sidon sets in F_2^m, with a focus on graphs of
//! APN functions F: F_2^n -> F_2^n.

pub mod cache;
pub mod error;
pub mod families;
pub mod field;
pub mod funcspec;
pub mod graphdist;
pub mod report;
pub mod sidon;
pub mod table3;
pub mod vbf;
pub mod viz;

pub use error::{Error, Result};
