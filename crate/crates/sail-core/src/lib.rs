//! Coupled interior-wave / boundary-beam laboratory.
//!
//! The crate builds a rectangular chamber whose bottom wall is rigid and whose
//! remaining boundary is a clamped flexible beam, simulates the coupled
//! second-order dynamics, evaluates weighted energy estimates and an
//! observability inequality on the discrete trajectories, and solves the
//! linear and nonlinear inverse source problems from beam-acceleration traces.
//!
//! All numerics are generic over the scalar type ([`scalar::Scalar`], i.e.
//! `f32` or `f64`); the aliases below fix the `f64` instantiation used by the
//! command-line driver.

pub mod discretize;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod scalar;

pub use error::{Error, Result};

/// Default scalar for the shipped tools.
pub type Real = f64;

/// `f64` geometry.
pub type Geometry = geometry::DomainGeometry<Real>;
/// `f64` convex weight.
pub type Weight = geometry::ConvexWeight<Real>;
/// `f64` Carleman parameter set.
pub type Params = geometry::CarlemanParams<Real>;
/// `f64` grid field.
pub type GridField = discretize::FieldOmega<Real>;
/// `f64` beam field.
pub type BeamField = discretize::FieldBeam<Real>;
