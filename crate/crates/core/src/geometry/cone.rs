use std::f64::consts::PI;

use super::{Polygon, Vec2};
use crate::{Error, Result};

/// An open convex cone of the plane with vertex at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvexCone {
    /// The sector `{ r(cos t, sin t) : r > 0, theta_lo < t < theta_hi }`.
    Sector { theta_lo: f64, theta_hi: f64 },
    FullPlane,
}

impl ConvexCone {
    pub fn sector(theta_lo: f64, theta_hi: f64) -> Result<Self> {
        let opening = theta_hi - theta_lo;
        if !(opening > 0.0 && opening <= PI + 1e-15) || !theta_lo.is_finite() {
            return Err(Error::Parameter(format!(
                "cone opening must lie in (0, pi], got {opening}"
            )));
        }
        Ok(ConvexCone::Sector { theta_lo, theta_hi })
    }

    /// The positive quadrant `{x > 0, y > 0}`.
    pub fn quadrant() -> Self {
        ConvexCone::Sector { theta_lo: 0.0, theta_hi: 0.5 * PI }
    }

    /// The upper half-plane `{y > 0}`.
    pub fn upper_half_plane() -> Self {
        ConvexCone::Sector { theta_lo: 0.0, theta_hi: PI }
    }

    pub fn is_full_plane(&self) -> bool {
        matches!(self, ConvexCone::FullPlane)
    }

    pub fn opening(&self) -> f64 {
        match *self {
            ConvexCone::FullPlane => 2.0 * PI,
            ConvexCone::Sector { theta_lo, theta_hi } => theta_hi - theta_lo,
        }
    }

    /// Unit directions of the two boundary rays.
    pub fn rays(&self) -> Option<(Vec2, Vec2)> {
        match *self {
            ConvexCone::FullPlane => None,
            ConvexCone::Sector { theta_lo, theta_hi } => {
                Some((Vec2::from_angle(theta_lo), Vec2::from_angle(theta_hi)))
            }
        }
    }

    /// Unit vector along the bisector.
    pub fn bisector(&self) -> Vec2 {
        match *self {
            ConvexCone::FullPlane => Vec2::new(1.0, 0.0),
            ConvexCone::Sector { theta_lo, theta_hi } => Vec2::from_angle(0.5 * (theta_lo + theta_hi)),
        }
    }

    /// Signed distance to the boundary lines: positive inside the open cone.
    /// For points inside a sector this equals the distance to the boundary rays.
    pub fn signed_boundary_distance(&self, p: Vec2) -> f64 {
        match self.rays() {
            None => f64::INFINITY,
            Some((lo, hi)) => {
                let d_lo = lo.cross(p);
                let d_hi = p.cross(hi);
                let inside_dist = |along: f64, d: f64| if along >= 0.0 { d } else { d.signum() * p.norm() };
                inside_dist(p.dot(lo), d_lo).min(inside_dist(p.dot(hi), d_hi))
            }
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.signed_boundary_distance(p) > 0.0
    }

    /// Membership in the closed cone up to `tol`.
    pub fn contains_closed(&self, p: Vec2, tol: f64) -> bool {
        self.signed_boundary_distance(p) >= -tol
    }

    /// Distance from `p` to the boundary rays (zero for the full plane never happens).
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        match self.rays() {
            None => f64::INFINITY,
            Some((lo, hi)) => ray_distance(p, lo).min(ray_distance(p, hi)),
        }
    }

    /// Whether the segment `[a, b]` lies on one boundary ray (within `tol`).
    pub fn segment_on_boundary(&self, a: Vec2, b: Vec2, tol: f64) -> bool {
        match self.rays() {
            None => false,
            Some((lo, hi)) => {
                (ray_distance(a, lo) <= tol && ray_distance(b, lo) <= tol)
                    || (ray_distance(a, hi) <= tol && ray_distance(b, hi) <= tol)
            }
        }
    }

    /// Half-planes `n . x <= 0` whose intersection is the closed cone.
    pub fn half_planes(&self) -> Vec<Vec2> {
        match self.rays() {
            None => vec![],
            Some((lo, hi)) => {
                // inside: lo x p >= 0 and p x hi >= 0
                let n_lo = Vec2::new(lo.y, -lo.x);
                let n_hi = Vec2::new(-hi.y, hi.x);
                if (self.opening() - PI).abs() < 1e-15 {
                    vec![n_lo]
                } else {
                    vec![n_lo, n_hi]
                }
            }
        }
    }

    /// Intersection of a polygon with the closed cone.
    pub fn clip(&self, poly: &Polygon) -> Result<Polygon> {
        let mut out = poly.clone();
        for n in self.half_planes() {
            out = out.clip_half_plane(n, 0.0)?;
        }
        Ok(out)
    }

    /// Translates `poly` along the bisector so that it keeps distance at least
    /// `delta` from the cone boundary rays. Returns `poly` for the full plane.
    pub fn shrink_into(&self, poly: &Polygon, delta: f64) -> Polygon {
        match *self {
            ConvexCone::FullPlane => poly.clone(),
            ConvexCone::Sector { .. } => {
                let half = 0.5 * self.opening();
                poly.translated(self.bisector() * (delta / half.sin()))
            }
        }
    }
}

fn ray_distance(p: Vec2, dir: Vec2) -> f64 {
    let t = p.dot(dir).max(0.0);
    p.dist(dir * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_membership() {
        let q = ConvexCone::quadrant();
        assert!(q.contains(Vec2::new(0.1, 0.2)));
        assert!(!q.contains(Vec2::new(-0.1, 0.2)));
        assert!(!q.contains(Vec2::new(0.0, 0.2)));
        assert!(q.contains_closed(Vec2::new(0.0, 0.2), 1e-12));
        assert!((q.boundary_distance(Vec2::new(0.3, 0.1)) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn half_plane_cone() {
        let h = ConvexCone::upper_half_plane();
        assert!(h.contains(Vec2::new(-5.0, 0.1)));
        assert!(!h.contains(Vec2::new(5.0, -0.1)));
        assert_eq!(h.half_planes().len(), 1);
        let disc = Polygon::regular_ngon(64, 1.0).unwrap();
        let half = h.clip(&disc).unwrap();
        assert!((half.area() - 0.5 * disc.area()).abs() < 1e-13);
    }

    #[test]
    fn rejects_reflex_opening() {
        assert!(ConvexCone::sector(0.0, 4.0).is_err());
        assert!(ConvexCone::sector(1.0, 1.0).is_err());
    }

    #[test]
    fn boundary_segments() {
        let q = ConvexCone::quadrant();
        assert!(q.segment_on_boundary(Vec2::ZERO, Vec2::new(1.0, 0.0), 1e-12));
        assert!(!q.segment_on_boundary(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), 1e-12));
    }

    #[test]
    fn shrink_keeps_margin() {
        let q = ConvexCone::quadrant();
        let sq = Polygon::unit_square();
        let moved = q.shrink_into(&sq, 0.01);
        for v in moved.vertices() {
            assert!(q.boundary_distance(*v) >= 0.01 - 1e-15);
        }
    }
}
