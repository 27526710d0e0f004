//! Exact finite-field linear algebra and matrix-group machinery for
//! checking adequacy, Ext^1 dimensions and module structure of small
//! modular representations.
//!
//! Everything here is `no_std` with `alloc`; IO lives in the companion
//! command-line crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adequacy;
pub mod catalog;
pub mod cohomology;
pub mod dsl;
pub mod error;
pub mod field;
pub mod group;
pub mod mat;
pub mod meataxe;
pub mod poly;
pub mod rep;
pub mod structure;
pub mod subspace;

pub use error::{Error, ErrorKind, Result};
pub use field::{Fe, Field};
pub use mat::{Mat, Rref};
pub use poly::Poly;
pub use subspace::Echelon;
