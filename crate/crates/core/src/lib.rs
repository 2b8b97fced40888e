//! Exact Θ-stratifications, baric windows and virtual non-abelian
//! localization for torus quotients of Koszul CDGAs.

pub mod baric;
pub mod charkit;
pub mod cli;
pub mod error;
pub mod gradedalg;
pub mod kloc;
pub mod stack;
pub mod strat;

pub use error::{Error, ErrorKind, Result};
