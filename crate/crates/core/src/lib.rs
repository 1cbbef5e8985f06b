pub mod constructions;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod layered;
pub mod richness;

pub use error::{Error, Result};
