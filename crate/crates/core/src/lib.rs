pub mod algebra;
pub mod architectures;
pub mod asymptotics;
pub mod classify;
pub mod error;
pub mod graph;
pub mod moments;
pub mod oracle;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
