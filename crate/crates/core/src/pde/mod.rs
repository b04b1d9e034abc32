//! Neumann and Dirichlet solvers and principal eigenpairs.

mod eigen;
mod fd;
mod fem;
mod field;
pub mod sparse;

use serde::{Deserialize, Serialize};

pub use eigen::{principal_eigen_fd, principal_eigen_fem, EigenField, EigenResult, EigenSummary, EIGEN_TOL};
pub use fd::{ellipticity_check, solve_dirichlet_fd, GridDomain, GridField, OperatorCoeffs};
pub use fem::{assemble_dirichlet_laplacian, solve_neumann, Flux, NeumannSolution, NeumannSummary};
pub use field::{hessian_recover, HessianRecovery, ScalarField, DEFAULT_RECOVERY_RINGS};
pub use sparse::{CsrMatrix, SolveStats};

/// Mesh size, cone shrink and linear-solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub h: f64,
    pub shrink: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { h: 0.02, shrink: 1e-2, tol: 1e-10, max_iter: 50_000 }
    }
}
