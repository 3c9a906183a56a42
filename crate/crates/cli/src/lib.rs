//! Command-line front end for the `detcore` determinant engine.

pub mod bench;
pub mod error;
pub mod eval;
pub mod selftest;

pub use error::{CliError, CliResult};
