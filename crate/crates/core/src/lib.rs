//! Exact-arithmetic pentagram maps on twisted polygons in projective d-space.
//!
//! Everything is computed over the rationals with no rounding: polygon
//! geometry (diagonal hyperplanes, intersections, projective equivalence),
//! the coefficient-array model of twisted polygons, the map engine for
//! generalized/dented/deep-dented/corrugated pentagram maps, and the
//! Lax/spectral layer (spectral function, invariant families, Casimirs,
//! Newton-polygon branch data, genus).
//!
//! Entry points:
//! - [`polygon::CoefficientArray`] / [`polygon::TwistedPolygon`] for the model,
//! - [`maps::MapSpec`] and [`maps::apply_map`] for the dynamics,
//! - [`spectral::spectral_function`] and friends for conserved quantities,
//! - [`verify`] for the machine-checkable theorem suites.

pub mod error;
pub mod laurent;
pub mod linalg;
pub mod maps;
pub mod polygon;
pub mod projective;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use error::Error;
pub use scalar::ExactScalar;
