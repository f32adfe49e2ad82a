//! Finite formal topology and sheaf semantics over truncated Cantor and Baire spaces.

pub mod brouwer;
pub mod double;
pub mod error;
pub mod forcing;
pub mod io;
pub mod maps;
pub mod points;
pub mod rules;
pub mod sheaves;
pub mod site;
pub mod spaces;
pub mod suites;

pub use error::{Error, Result};
