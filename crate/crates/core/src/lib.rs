pub mod arith;
pub mod error;
pub mod resolution;
pub mod singular;
pub mod verma;

pub use error::{Error, Result};
