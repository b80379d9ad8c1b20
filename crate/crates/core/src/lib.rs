//! chiralform: an exact differential-form workbench for chiral bulk/boundary
//! field theories on product geometries.
//!
//! The crate builds, on two worked geometries (a lightcone half-space and an
//! annular cylinder), the full chain from exact exterior calculus through
//! directed Green's homotopies and unshifted Poisson pairings to CCR
//! dg-algebras, dimensional reduction and the boundary zig-zag, with every
//! homological identity exposed as an executable check. Arithmetic runs on an
//! exact rational backend (default) or on `f64`.

pub mod scalar;
pub mod poly;
pub mod spline;
pub mod fourier;
pub mod coeff;
pub mod geometry;
pub mod forms;
pub mod regions;
pub mod linalg;
pub mod complexes;
pub mod greens;
pub mod poisson;
pub mod reduction;
pub mod ccr;
pub mod serial;
pub mod par;
pub mod sampling;
pub mod suites;

pub use geometry::{Chirality, Geometry, GeometryKind, Pointing, SpaceId};
pub use scalar::{Cx, Exact, Q, Scalar};
