//! Exact u-series arithmetic for Drinfeld modular forms over F_q[T].

pub mod algebra;
pub mod carlitz;
pub mod error;
pub mod expr;
pub mod forms;
pub mod operators;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
