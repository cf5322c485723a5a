//! Spectra of co-triangular semisimple Hopf algebras.
//!
//! For a finite group `G`, a subgroup `H` and a minimal twist `J` on `H`, the
//! dual of the twisted group algebra `C[G]^J` splits into blocks indexed by
//! double cosets `HgH`. This crate computes the irreducible dimensions of each
//! block three ways (directly, through an invariant subalgebra of
//! `A_2* ⊗ A_1*`, and through a twisted group algebra of `K_g = H ∩ gHg⁻¹`)
//! and checks that they agree.

pub mod algebra;
pub mod correspondence;
pub mod dual_algebras;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod projective;
pub mod scalars;
pub mod semisimple;
pub mod twist;

pub use error::{Error, Result};
