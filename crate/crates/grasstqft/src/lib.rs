//! Exact computation engine for the rank `r`, level `k` Grassmann TQFT.
//!
//! The crate evaluates closed Verlinde numbers, open matrix elements, fusion
//! (quantum cohomology) structure constants, f-class intersection numbers and
//! parabolic Verlinde numbers, all in exact cyclotomic arithmetic, and checks
//! the TQFT axioms (gluing, degeneration, level-rank duality) as executable
//! properties.

pub mod cyclotomic;
pub mod error;
pub mod expr;
pub mod floats;
pub mod partitions;
pub mod rational;
pub mod sympoly;
pub mod tqft;
pub mod vi;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic};
pub use error::{Error, Result};
pub use floats::{FloatApprox, FloatCtx};
pub use partitions::{enumerate_basis, Multipartition, Partition, TupleEnumerator, TupleMode};
pub use rational::Rational;
