use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::certificate::Certificate;
use super::contact::tilted_argmin;
use crate::geometry::quadrature::triangle_integral;
use crate::geometry::{triangulate, Vec2};
use crate::pde::GridField;
use crate::{Error, Result};

/// Boundary values above this count as positive.
const BOUNDARY_TOL: f64 = 1e-12;
/// Cells per diameter of the quadrature mesh for `‖f⁻‖`.
const NORM_CELLS: f64 = 40.0;

/// ABP constant of the Laplacian in the plane, `1/(2|B₁|^{1/2})`: the
/// covering `B_{M/d} ⊂ ∇u(Γ^u)` and `det(−D²u) ≤ (f⁻/2)²` give
/// `π(M/d)² ≤ ‖f⁻‖²/4`.
pub fn laplacian_abp_constant() -> f64 {
    0.5 / std::f64::consts::PI.sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct DirichletReport {
    pub sup_u: f64,
    pub diameter: f64,
    /// `‖f⁻‖_{L²(Ω)}`.
    pub f_norm: f64,
    /// `sup u / (diam · ‖f⁻‖)`, zero when `f⁻ = 0`.
    pub ratio: f64,
    /// Radius `M/d` of the gradient ball.
    pub ball_radius: f64,
    pub samples: usize,
    pub covered: usize,
    pub coverage: f64,
    pub seed: u64,
}

impl DirichletReport {
    /// Coverage of the gradient ball and, for `L₀ = Δ`, the bound
    /// `ratio ≤` [`laplacian_abp_constant`].
    pub fn certificate(&self, laplacian: bool) -> Certificate {
        let mut c = Certificate::new("abp dirichlet estimate");
        c.push("gradient_ball_coverage", 1.0, self.coverage, 0.0);
        if laplacian {
            c.push("abp_bound", self.ratio, laplacian_abp_constant(), 0.0);
        }
        c.meta("ratio", self.ratio);
        c.meta("sup_u", self.sup_u);
        c.meta("seed", self.seed);
        c.meta("samples", self.samples);
        c
    }
}

/// Empirical ABP constant of a grid solution of `L₀u = f`, `u = 0` on `∂Ω`,
/// together with the check `B_{M/d} ⊂ ∇u(Γ^u)`.
///
/// For `p` in the ball the maximizer of `u(y) + p·y` over the closed grid
/// must be an interior node.
pub fn abp_dirichlet_ratio(u: &GridField, f: &dyn Fn(Vec2) -> f64, samples: usize, seed: u64) -> Result<DirichletReport> {
    let dom = &u.domain;
    let closed: Vec<usize> = (0..dom.num_nodes()).filter(|&k| dom.is_in_closure(k)).collect();
    if let Some(&k) = closed.iter().find(|&&k| !dom.is_masked(k) && u.values[k] > BOUNDARY_TOL) {
        return Err(Error::Precondition(format!(
            "solution is positive ({:.3e}) at boundary node {k}",
            u.values[k]
        )));
    }
    let poly = dom.polygon();
    let diameter = poly.diameter();
    let qmesh = triangulate(poly, diameter / NORM_CELLS)?;
    let f_sq: f64 = (0..qmesh.triangles().len())
        .map(|t| triangle_integral(qmesh.triangle_points(t), |x| f(x).min(0.0).powi(2)))
        .sum();
    let f_norm = f_sq.sqrt();
    let sup_u = closed.iter().map(|&k| u.values[k]).fold(0.0, f64::max);
    let ratio = if f_norm > 0.0 { sup_u / (diameter * f_norm) } else { 0.0 };

    let radius = sup_u / diameter;
    let pts: Vec<Vec2> = closed.iter().map(|&k| dom.point(k)).collect();
    let neg: Vec<f64> = closed.iter().map(|&k| -u.values[k]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ps: Vec<Vec2> = (0..samples)
        .map(|_| loop {
            let p = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if p.norm_sq() < 1.0 {
                break p * radius;
            }
        })
        .collect();
    let covered = ps
        .par_iter()
        .map(|&p| dom.is_masked(closed[tilted_argmin(&pts, &neg, p)]))
        .filter(|&ok| ok)
        .count();
    Ok(DirichletReport {
        sup_u,
        diameter,
        f_norm,
        ratio,
        ball_radius: radius,
        samples,
        covered,
        coverage: if samples == 0 { 1.0 } else { covered as f64 / samples as f64 },
        seed,
    })
}
