//! Numerical laboratory for the Alexandroff–Bakelman–Pucci (ABP) method.
//!
//! The crate discretizes, step by step, the ABP proofs of the classical,
//! anisotropic (Wulff) and weighted-cone isoperimetric inequalities and of the
//! principal-eigenvalue lower bound for planar polygonal domains. Every
//! inequality link that a proof uses is evaluated numerically and recorded in a
//! [`Certificate`](abp::Certificate).
//!
//! Module map:
//! - [`geometry`]: polygons, cones, gauges, Wulff shapes, meshes, perimeters.
//! - [`weights`]: homogeneous weights on cones.
//! - [`pde`]: Neumann/Dirichlet solvers and principal eigenpairs.
//! - [`abp`]: contact sets, Legendre argmins, area-formula integrals, chains.
//! - [`inequalities`]: quotient reports, Sobolev checks, end-to-end traces.

pub mod abp;
pub mod config;
pub mod error;
pub mod geometry;
pub mod inequalities;
pub mod pde;
pub mod report;
pub mod special;
pub mod weights;

pub use error::{Error, Result};
pub use geometry::{ConvexCone, Gauge, Polygon, TriMesh, Vec2, WulffShape};
pub use weights::HomogeneousWeight;

/// Default seed for every randomized check.
pub const DEFAULT_SEED: u64 = 0x5EED;
