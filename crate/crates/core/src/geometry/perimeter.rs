use std::f64::consts::PI;

use super::quadrature::segment_integral;
use super::{ConvexCone, Gauge, Polygon, Vec2};
use crate::weights::HomogeneousWeight;
use crate::{Error, Result};

/// Number of graded sub-edges used near a cone boundary where `w` vanishes.
pub const GRADED_SUBEDGES: usize = 8;

/// `P_{w,H}(Ω; Σ) = ∫_{∂Ω ∩ Σ} H(ν) w dS`.
///
/// Edges lying on `∂Σ` are skipped. Every other edge must stay in the closed
/// cone; clip the polygon first. When `w` vanishes on `∂Σ`, edges closer to
/// `∂Σ` than their own length are split into [`GRADED_SUBEDGES`] pieces graded
/// quadratically toward the cone boundary.
pub fn perimeter_weighted(poly: &Polygon, cone: &ConvexCone, h: &Gauge, w: &HomogeneousWeight) -> Result<f64> {
    let tol = 1e-10 * poly.diameter();
    let graded = w.vanishes_on_cone_boundary();
    let mut total = 0.0;
    for (a, b) in poly.edges() {
        if !cone.is_full_plane() {
            if cone.segment_on_boundary(a, b, tol) {
                continue;
            }
            if !cone.contains_closed(a, tol) || !cone.contains_closed(b, tol) {
                return Err(Error::Geometry(format!(
                    "edge ({:.6}, {:.6})-({:.6}, {:.6}) crosses the cone boundary; clip the polygon first",
                    a.x, a.y, b.x, b.y
                )));
            }
        }
        let len = a.dist(b);
        let energy = h.eval((b - a).perp_cw()) / len;
        let f = |x: Vec2| w.value(x);
        let (da, db) = (cone.boundary_distance(a), cone.boundary_distance(b));
        let integral = if graded && da.min(db) < len {
            // grade toward the endpoint nearer to the cone boundary
            let (near, far) = if da <= db { (a, b) } else { (b, a) };
            let n = GRADED_SUBEDGES as f64;
            (0..GRADED_SUBEDGES)
                .map(|k| {
                    let s0 = (k as f64 / n).powi(2);
                    let s1 = ((k + 1) as f64 / n).powi(2);
                    segment_integral(near + (far - near) * s0, near + (far - near) * s1, f)
                })
                .sum()
        } else if w.is_constant() {
            len * w.value(a)
        } else {
            segment_integral(a, b, f)
        };
        total += energy * integral;
    }
    Ok(total)
}

/// Euclidean perimeter of `∂Ω ∩ Σ` (unit weight, Euclidean gauge).
pub fn relative_perimeter(poly: &Polygon, cone: &ConvexCone) -> Result<f64> {
    perimeter_weighted(poly, cone, &Gauge::euclidean(), &HomogeneousWeight::constant_on(*cone))
}

/// `(|B_1|, P(B_1))` in dimension `n`, with `|B_1| = pi^(n/2) / Γ(n/2 + 1)`.
pub fn ball_constants(n: u32) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::Parameter("dimension must be at least 1".into()));
    }
    // Γ(n/2 + 1) by the recursion Γ(s + 1) = s Γ(s) from Γ(1) = 1 or Γ(1/2) = sqrt(pi)
    let mut gamma = if n % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut s = if n % 2 == 0 { 1.0 } else { 0.5 };
    while s < 0.5 * n as f64 + 1.0 - 1e-12 {
        gamma *= s;
        s += 1.0;
    }
    let vol = PI.powf(0.5 * n as f64) / gamma;
    Ok((vol, n as f64 * vol))
}
