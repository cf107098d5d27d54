//! Graded module categories for reduced enveloping algebras in positive characteristic.

pub mod error;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod rootdata;
pub mod weyl;
pub mod coeff;
pub mod sparse;
pub mod gradedmod;
pub mod induction;
pub mod structure;
pub mod duality;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Fp, Scalar, F11, F13, F3, F5, F7};
pub use lattice::{Sublattice, Weight};
pub use linalg::{Mat, Span};
