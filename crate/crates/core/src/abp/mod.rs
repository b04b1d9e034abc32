//! Contact sets, Legendre argmins, area-formula integrals and certificates.

mod certificate;
mod chain;
mod contact;
mod dirichlet;

pub use certificate::{Certificate, Link};
pub use chain::{
    eigen_chain_check, log_eigen_transform, log_residual, LogTransform, LogTransformSummary, CHAIN_CLIP, CHAIN_SLACK,
    DEFAULT_CLIP, RESIDUAL_TOL, TAIL_LIMIT,
};
pub use contact::{
    amgm_check, contact_integral, default_contact_epsilon, free_boundary_hops, gradient_coverage, legendre_argmin,
    lower_contact_set, rigidity_check, sample_polygon, tilted_argmin, AmgmReport, ContactSet, CoverageFailure,
    CoverageReport, Integrand, RigidityReport, WeightedContext, AMGM_TOL, INTERIOR_HOPS, WEIGHTED_AMGM_TOL,
};
pub use dirichlet::{abp_dirichlet_ratio, laplacian_abp_constant, DirichletReport};
