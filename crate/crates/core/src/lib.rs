//! Invariant half-flat, hypo and nearly hypo structures on nilpotent Lie
//! algebras, the evolution equations relating them, and the resulting
//! metrics with holonomy in G2.

pub mod curvature;
pub mod exterior;
pub mod flow;
pub mod io;
pub mod liealg;
pub mod linalg;
pub mod metric;
pub mod reduction;
pub mod scalar;
pub mod search;
pub mod stable;
pub mod structures;
pub mod torsion;

pub use exterior::Form;
pub use liealg::LieAlgebra;
pub use scalar::{q, Jet, Scalar, Q};
