use std::sync::Arc;

use serde::Serialize;

use super::fd::{assemble_operator, GridDomain, GridField, OperatorCoeffs};
use super::fem::assemble_dirichlet_laplacian;
use super::field::ScalarField;
use super::sparse::{bicgstab, cg, dot, norm, CsrMatrix};
use super::SolverConfig;
use crate::geometry::TriMesh;
use crate::{Error, Result};

/// Eigenvalue increment below which inverse iteration stops.
pub const EIGEN_TOL: f64 = 1e-10;
const MAX_OUTER: usize = 2000;
const WARMUP: usize = 6;

#[derive(Debug, Clone)]
pub enum EigenField {
    Mesh(ScalarField),
    Grid(GridField),
}

/// Principal eigenpair `L₀φ = -λφ`, `φ = 0` on `∂Ω`, with `φ > 0` and `max φ = 1`.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambda: f64,
    pub phi: EigenField,
    pub iterations: usize,
    /// Relative eigenvalue increment of the last iteration.
    pub increment: f64,
    /// `‖Aφ - λBφ‖ / ‖λBφ‖` of the discrete problem.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EigenSummary {
    pub lambda: f64,
    pub iterations: usize,
    pub increment: f64,
    pub residual: f64,
}

impl EigenResult {
    pub fn summary(&self) -> EigenSummary {
        EigenSummary { lambda: self.lambda, iterations: self.iterations, increment: self.increment, residual: self.residual }
    }

    pub fn mesh_field(&self) -> Option<&ScalarField> {
        match &self.phi {
            EigenField::Mesh(f) => Some(f),
            EigenField::Grid(_) => None,
        }
    }

    pub fn grid_field(&self) -> Option<&GridField> {
        match &self.phi {
            EigenField::Grid(g) => Some(g),
            EigenField::Mesh(_) => None,
        }
    }
}

/// Sign-fixes and max-normalizes `x`; negative entries are a discretization error.
fn normalize_positive(x: &mut [f64]) -> Result<()> {
    let (imax, _) = x
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .ok_or_else(|| Error::Discretization("empty eigenvector".into()))?;
    let s = 1.0 / x[imax];
    x.iter_mut().for_each(|v| *v *= s);
    if let Some(v) = x.iter().copied().find(|&v| v <= 0.0) {
        return Err(Error::Discretization(format!(
            "principal eigenvector has a non-positive entry {v:.3e}; refine the discretization"
        )));
    }
    Ok(())
}

/// Dirichlet Laplacian on a mesh: `K φ = λ M φ` with consistent mass, by
/// inverse iteration that switches to the shift `0.9 λ` after a warm-up.
pub fn principal_eigen_fem(mesh: Arc<TriMesh>, cfg: &SolverConfig) -> Result<EigenResult> {
    let (k, m, interior) = assemble_dirichlet_laplacian(&mesh)?;
    let n = k.dim();
    let mut x = vec![1.0; n];
    let mut lambda = rayleigh(&k, &m, &x);
    let mut increment = f64::INFINITY;
    let mut shifted: Option<(f64, CsrMatrix)> = None;
    let mut iterations = 0;
    let inner_tol = (cfg.tol * 1e-2).max(1e-13);
    while iterations < MAX_OUTER {
        iterations += 1;
        let rhs = m.apply(&x);
        let mut y = x.clone();
        match &shifted {
            None => cg(&k, &rhs, &mut y, inner_tol, cfg.max_iter)?,
            Some((_, a)) => cg(a, &rhs, &mut y, inner_tol, cfg.max_iter)?,
        };
        let ny = norm(&y);
        y.iter_mut().for_each(|v| *v /= ny);
        x = y;
        let new_lambda = rayleigh(&k, &m, &x);
        increment = ((new_lambda - lambda) / new_lambda).abs();
        lambda = new_lambda;
        if shifted.is_none() && iterations >= WARMUP {
            let sigma = 0.9 * lambda;
            shifted = Some((sigma, k.add_scaled(-sigma, &m)));
        } else if increment < EIGEN_TOL && shifted.is_some() {
            break;
        }
    }
    if increment >= EIGEN_TOL {
        return Err(Error::Stagnation { iterations, increment });
    }
    normalize_positive(&mut x)?;
    let kx = k.apply(&x);
    let mx = m.apply(&x);
    let r: Vec<f64> = kx.iter().zip(&mx).map(|(a, b)| a - lambda * b).collect();
    let residual = norm(&r) / (lambda * norm(&mx));
    let mut values = vec![0.0; mesh.num_vertices()];
    for (d, &v) in interior.iter().enumerate() {
        values[v] = x[d];
    }
    Ok(EigenResult {
        lambda,
        phi: EigenField::Mesh(ScalarField::new(mesh, values)),
        iterations,
        increment,
        residual,
    })
}

fn rayleigh(k: &CsrMatrix, m: &CsrMatrix, x: &[f64]) -> f64 {
    dot(x, &k.apply(x)) / dot(x, &m.apply(x))
}

/// Nondivergence operator on a grid: `-L_h φ = λ φ`, by shifted inverse
/// iteration on the nonsymmetric matrix.
pub fn principal_eigen_fd(domain: Arc<GridDomain>, coeffs: &OperatorCoeffs, cfg: &SolverConfig) -> Result<EigenResult> {
    let a = assemble_operator(&domain, coeffs)?;
    let n = a.dim();
    let identity = CsrMatrix::from_triplets(n, (0..n).map(|i| (i, i, 1.0)).collect());
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = f64::NAN;
    let mut increment = f64::INFINITY;
    let mut sigma = 0.0;
    let mut op = a.clone();
    let mut iterations = 0;
    let inner_tol = (cfg.tol * 1e-2).max(1e-13);
    while iterations < MAX_OUTER {
        iterations += 1;
        let mut y = x.clone();
        bicgstab(&op, &x, &mut y, inner_tol, cfg.max_iter)?;
        // y ≈ x / (λ - σ)
        let new_lambda = sigma + dot(&x, &x) / dot(&x, &y);
        let ny = norm(&y);
        let s = if dot(&x, &y) < 0.0 { -1.0 } else { 1.0 };
        x = y.iter().map(|v| s * v / ny).collect();
        increment = if lambda.is_nan() { f64::INFINITY } else { ((new_lambda - lambda) / new_lambda).abs() };
        lambda = new_lambda;
        if iterations == WARMUP {
            sigma = 0.9 * lambda;
            op = a.add_scaled(-sigma, &identity);
        } else if iterations > WARMUP && increment < EIGEN_TOL {
            break;
        }
    }
    if increment >= EIGEN_TOL {
        return Err(Error::Stagnation { iterations, increment });
    }
    normalize_positive(&mut x)?;
    // eigenvalue from the converged vector
    let ax = a.apply(&x);
    lambda = dot(&x, &ax) / dot(&x, &x);
    let r: Vec<f64> = ax.iter().zip(&x).map(|(p, q)| p - lambda * q).collect();
    let residual = norm(&r) / (lambda * norm(&x));
    Ok(EigenResult {
        lambda,
        phi: EigenField::Grid(GridField::from_unknowns(domain, &x)),
        iterations,
        increment,
        residual,
    })
}
