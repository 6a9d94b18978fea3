pub mod algebra;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod experiment;
pub mod linalg;
pub mod model;
pub mod operators;
pub mod schedule;

pub use error::{Error, Result};
