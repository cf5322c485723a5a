//! Exact and floating-point linear algebra.

pub mod exact;
pub mod float;
pub(crate) mod modular;

pub use exact::{inverse, nullspace, rank, same_column_space, solve, CycMatrix};
pub use float::{CMat, C64};
