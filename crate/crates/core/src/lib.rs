pub mod commutator;
pub mod error;
pub mod formula;
pub mod hf;
pub mod implication;
pub mod lattice;
pub mod matrix;
pub mod report;
pub mod transfer;
pub mod universe;

pub use error::{Error, Result};
pub use lattice::{ElemSet, Element, LatticeError, Logic};
