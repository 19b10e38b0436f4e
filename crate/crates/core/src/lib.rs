pub mod arith;
pub mod cli;
pub mod curves;
pub mod error;
pub mod family;
pub mod groups;
pub mod split;

pub use error::{Error, Result};
