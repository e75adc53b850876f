//! Exact construction of smash biproduct algebras and their Hochschild homology.

pub mod error;
pub mod linalg;
pub mod pbw;
pub mod twist;
pub mod hochschild;
pub mod algebras;
pub mod bicomplex;
pub mod reductions;
pub mod catalog;

pub use error::{Error, Result};
