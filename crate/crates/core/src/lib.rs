//! Finite-dimensional laboratory for cut-and-paste surgery on Fredholm
//! modules and the relative index theorem.

pub mod algebra;
pub mod error;
pub mod experiment;
pub mod fredholm;
pub mod index;
pub mod linalg;
pub mod models;
pub mod surgery;
pub mod symbolic;

pub use error::{Error, Result};
