//! Generating weights of free modules of vector-valued modular forms for
//! Weil representations of finite quadratic modules.

pub mod arith;
pub mod cyclotomic;
pub mod dims;
pub mod error;
pub mod family;
pub mod quadmod;
pub mod weilrep;

pub use error::{Error, Result};
