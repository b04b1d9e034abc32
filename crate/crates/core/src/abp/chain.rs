use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::certificate::Certificate;
use super::contact::{contact_integral, lower_contact_set, Integrand};
use crate::geometry::quadrature::gauss_legendre;
use crate::pde::{EigenResult, ScalarField};
use crate::{Error, Result};

/// Default interior fraction kept by [`log_eigen_transform`].
pub const DEFAULT_CLIP: f64 = 0.8;
/// Interior fraction used for the integral chain, which needs the large
/// gradients near the boundary.
pub const CHAIN_CLIP: f64 = 0.95;
/// Declared slack of both chain links.
pub const CHAIN_SLACK: f64 = 0.10;
/// Admissible relative L¹ residual of the log transform.
pub const RESIDUAL_TOL: f64 = 0.05;
/// Largest admissible truncation tail relative to the full integral.
pub const TAIL_LIMIT: f64 = 1e-2;

/// `u = −log φ₁` on the region `{dist(x, ∂Ω) ≥ (1 − clip)·r_in}`.
#[derive(Debug, Clone)]
pub struct LogTransform {
    pub field: ScalarField,
    pub lambda: f64,
    pub clip: f64,
    pub inradius: f64,
    /// Relative L¹ residual of `Δu = λ₁ + |∇u|²` on the region.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LogTransformSummary {
    pub lambda: f64,
    pub clip: f64,
    pub inradius: f64,
    pub residual: f64,
    pub vertices: usize,
}

impl LogTransform {
    pub fn summary(&self) -> LogTransformSummary {
        LogTransformSummary {
            lambda: self.lambda,
            clip: self.clip,
            inradius: self.inradius,
            residual: self.residual,
            vertices: self.field.mesh().num_vertices(),
        }
    }
}

/// Restricts `−log φ₁` of a mesh eigenpair to the clipped interior region.
pub fn log_eigen_transform(eig: &EigenResult, clip: f64) -> Result<LogTransform> {
    if !(clip > 0.0 && clip < 1.0) {
        return Err(Error::Parameter(format!("clip must lie in (0, 1), got {clip}")));
    }
    let phi = eig
        .mesh_field()
        .ok_or_else(|| Error::Precondition("log transform needs a mesh eigenfunction".into()))?;
    let mesh = phi.mesh();
    let dist = mesh.boundary_distances();
    let inradius = dist.iter().copied().fold(0.0, f64::max);
    let cut = (1.0 - clip) * inradius;
    let (sub, new_to_old) = mesh.submesh(|i| dist[i] >= cut)?;
    let mut values = Vec::with_capacity(new_to_old.len());
    for &i in &new_to_old {
        let v = phi.value(i);
        if v <= 0.0 {
            return Err(Error::Discretization(format!(
                "eigenfunction is {v:.3e} at vertex {i} inside the clip region; refine the mesh"
            )));
        }
        values.push(-v.ln());
    }
    let field = ScalarField::new(Arc::new(sub), values);
    let residual = log_residual(&field, eig.lambda);
    Ok(LogTransform { field, lambda: eig.lambda, clip, inradius, residual })
}

/// `Σ a_i |Δu − λ − |∇u|²| / Σ a_i (λ + |∇u|²)` with lumped areas.
pub fn log_residual(u: &ScalarField, lambda: f64) -> f64 {
    let areas = u.mesh().lumped_areas();
    let (mut num, mut den) = (0.0, 0.0);
    for (i, a) in areas.iter().enumerate() {
        let rhs = lambda + u.gradient(i).norm_sq();
        num += a * (u.hessian(i).trace() - rhs).abs();
        den += a * rhs;
    }
    num / den
}

/// `2π ∫₀^R r f(r) dr` on panels that double in length from `R·2⁻⁴⁰`.
fn radial_integral(f: impl Fn(f64) -> f64, r_max: f64) -> f64 {
    let (x, w) = gauss_legendre(12);
    let mut sum = 0.0;
    let mut a = 0.0;
    let mut b = r_max * 2f64.powi(-40);
    while a < r_max {
        let (c, h) = ((a + b) / 2.0, (b - a) / 2.0);
        sum += h * x.iter().zip(&w).map(|(&t, &wt)| wt * (c + h * t) * f(c + h * t)).sum::<f64>();
        a = b;
        b = (2.0 * b).min(r_max);
    }
    2.0 * PI * sum
}

/// The integral chain of the eigenvalue lower bound in the plane.
///
/// With `g(p) = 1/(λ² + |Ω|⁻¹|p|² + |p|⁴)` the certificate holds
/// `∫_{ℝ²} g ≤ ∫_Γ g(|∇u|) det D²u` (area formula) and
/// `∫_{ℝ²} g ≥ c |Ω| log(1 + 2|Ω|⁻²λ⁻²)` (lower integral), each with
/// relative slack `slack`.
pub fn eigen_chain_check(u: &ScalarField, lambda: f64, area: f64, b_norm: f64, slack: f64) -> Result<Certificate> {
    if !(lambda > 0.0 && area > 0.0) {
        return Err(Error::Parameter(format!("need λ₁ > 0 and |Ω| > 0, got {lambda}, {area}")));
    }
    let g = move |r: f64| 1.0 / (lambda * lambda + r * r / area + r.powi(4));
    let r_max = 1e3 * (1.0 + lambda.sqrt() + area.powf(-0.5));
    let left_trunc = radial_integral(g, r_max);
    let tail = PI / (r_max * r_max);
    if tail > TAIL_LIMIT * left_trunc {
        return Err(Error::Truncation { tail, total: left_trunc });
    }
    let left = left_trunc + tail;

    let gamma = lower_contact_set(u, None);
    let right = contact_integral(&gamma, &Integrand::Radial(&g));

    let r0 = area.powf(-0.5);
    let lower = radial_integral(|r| 1.0 / (lambda * lambda + 2.0 * r * r / area), r0);
    let log_term = (1.0 + 2.0 / (area * area * lambda * lambda)).ln();
    let c2 = lower / (area * log_term);
    let analytic = c2 * area * log_term;

    let mut cert = Certificate::new("eigenvalue lower bound");
    cert.push("area_formula", left, right, slack * right);
    cert.push("lower_integral", analytic, left, slack * analytic);
    cert.meta("lambda", lambda);
    cert.meta("area", area);
    cert.meta("b_norm", b_norm);
    cert.meta("c2", c2);
    cert.meta("truncation_radius", r_max);
    cert.meta("tail_bound", tail);
    cert.meta("contact_members", gamma.len());
    cert.meta("contact_area_fraction", gamma.area_fraction());
    cert.meta("lambda_area", lambda * area);
    cert.meta("implied_constant_lower_bound", 2.0 / (area * area * lambda * lambda));
    cert.meta("right_over_area", right / ((1.0 + b_norm * b_norm) * area));
    Ok(cert)
}
