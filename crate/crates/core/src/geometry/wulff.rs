use std::f64::consts::PI;

use super::polygon::convex_hull_points;
use super::{ConvexCone, Gauge, Polygon, Vec2};
use crate::{Error, Result};

/// The Wulff shape `W = { p : p . nu < H(nu) for all nu }` of a gauge,
/// realized as the intersection of finitely many half-planes.
#[derive(Debug, Clone)]
pub struct WulffShape {
    pub polygon: Polygon,
    pub gauge: Gauge,
}

impl WulffShape {
    /// For the Euclidean gauge `W` is the unit disc; the polygon is only its
    /// circumscribed approximation and measures should use the exact values.
    pub fn is_exact_ball(&self) -> bool {
        self.gauge.is_euclidean()
    }

    /// `(P_H(W), |W|)`: exact `(2 pi, pi)` for the ball, polygon values otherwise.
    pub fn perimeter_and_area(&self) -> (f64, f64) {
        if self.is_exact_ball() {
            (2.0 * PI, PI)
        } else {
            let per = self
                .polygon
                .edges()
                .map(|(a, b)| self.gauge.eval((b - a).perp_cw()))
                .sum();
            (per, self.polygon.area())
        }
    }

    /// `W ∩ Σ` as a polygon.
    pub fn clipped(&self, cone: &ConvexCone) -> Result<Polygon> {
        cone.clip(&self.polygon)
    }
}

/// Intersection of the half-planes `{ p . nu_k <= H(nu_k) }` over the sample
/// directions of `h` (`m` directions for the Euclidean gauge).
///
/// Computed by polar duality: the vertices of `W` correspond to the edges of
/// the convex hull of the dual points `nu_k / H(nu_k)`.
pub fn wulff_shape(h: &Gauge, m: usize) -> Result<WulffShape> {
    if m < 3 && h.is_euclidean() {
        return Err(Error::Parameter(format!("need at least 3 directions, got {m}")));
    }
    let samples = h.samples(m);
    let scale = samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    if let Some(&(nu, v)) = samples.iter().find(|s| s.1 < 0.0) {
        return Err(Error::Gauge(format!(
            "negative support value H({:.4}, {:.4}) = {v}: the half-plane intersection excludes the origin",
            nu.x, nu.y
        )));
    }
    if samples.iter().any(|s| s.1 <= 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::DegenerateGauge(
            "H vanishes on a sampled direction; the Wulff shape is unbounded, intersect with a cone".into(),
        ));
    }
    let dual: Vec<Vec2> = samples.iter().map(|&(nu, v)| nu / v).collect();
    let hull = convex_hull_points(&dual);
    // the origin must lie strictly inside the dual hull for W to be bounded
    let n = hull.len();
    if n < 3 || (0..n).any(|i| hull[i].cross(hull[(i + 1) % n]) <= 0.0) {
        return Err(Error::DegenerateGauge("sampled half-planes do not bound a compact set".into()));
    }
    let mut verts = Vec::with_capacity(n);
    for i in 0..n {
        let (qa, qb) = (hull[i], hull[(i + 1) % n]);
        // p . qa = 1 and p . qb = 1
        let det = qa.cross(qb);
        let p = Vec2::new(qb.y - qa.y, qa.x - qb.x) / det;
        verts.push(p);
    }
    let tol = 1e-12 * verts.iter().map(|v| v.norm()).fold(0.0, f64::max);
    verts.dedup_by(|a, b| a.dist(*b) <= tol);
    if verts.len() > 1 && verts[0].dist(verts[verts.len() - 1]) <= tol {
        verts.pop();
    }
    verts.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
    Ok(WulffShape { polygon: Polygon::new(verts)?, gauge: h.clone() })
}
