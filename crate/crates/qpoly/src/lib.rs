//! Weighted quiver polyhedra (dimer models on compact orientable
//! surfaces and orbifolds): superpotentials, Jacobi relations, gradings,
//! zigzag paths, covers and the consistency conditions that characterize
//! cancellation / Calabi-Yau-3 Jacobi algebras, together with checks of
//! their equivalences on concrete instances.

pub mod consistency;
pub mod covers;
pub mod embed;
pub mod error;
pub mod format;
pub mod grading;
pub mod poly;
pub mod random;
pub mod rat;
pub mod report;
pub mod rewrite;
pub mod simplex;
pub mod snf;
pub mod zigzag;

pub mod testfix;

pub use error::{Error, Result};
pub use poly::{Arrow, Face, FaceRef, Path, QuiverPolyhedron, Sign};
pub use rat::Rat;
