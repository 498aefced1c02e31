//! Two-gradings of simple real Lie algebras, the special symplectic data they
//! carry, the associated curvature spaces and the contact-geometry flows built
//! on top of them.
//!
//! Exact parts are generic over [`scalar::Field`]; concrete aliases below cover
//! the common cases.

#![allow(clippy::needless_range_loop)]

pub mod contactflow;
pub mod curvature;
pub mod error;
pub mod grading;
pub mod liecore;
pub mod linalg;
pub mod rootsys;
pub mod scalar;
pub mod sympdata;

pub use error::{Error, Result};
pub use scalar::{Field, GaussianRational, Rational, C64};

/// Lie algebra with exact rational structure constants.
pub type QLieAlgebra = liecore::LieAlgebra<Rational>;
/// Lie algebra with floating point structure constants.
pub type FLieAlgebra = liecore::LieAlgebra<f64>;

/// Contact grading with exact coordinates.
pub type QGrading = grading::TwoGrading<Rational>;
/// Special symplectic data with exact entries.
pub type QSymplecticData = sympdata::SymplecticData<Rational>;
/// Special symplectic data in floating point.
pub type FSymplecticData = sympdata::SymplecticData<f64>;

/// Library version, echoed in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
