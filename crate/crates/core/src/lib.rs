pub mod error;
pub mod funcspace;
pub mod partitions;
pub mod rational;

pub use error::{Error, Result};
pub mod linalg;
pub mod polytope;
pub mod cache;
pub mod lambda;
pub mod cumulants;
pub mod moments;
pub mod syntax;
