//! Exact Lie algebras: structure constants, Killing forms, audits and models.

mod algebra;
pub mod chevalley;
pub mod matrix_forms;

pub use algebra::{Coordinates, JacobiReport, LieAlgebra, MatrixModel, SparseVec, StructureJson};
pub use chevalley::{chevalley_algebra, ChevalleyOptions, CONVENTION_VERSION};
