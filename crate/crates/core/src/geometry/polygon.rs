use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Vec2;
use crate::{Error, Result};

/// Relative area below which a polygon is treated as degenerate.
const DEGENERATE_AREA: f64 = 1e-14;

/// A simple polygon with counterclockwise vertex order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let vertices = Vec::<Vec2>::deserialize(d)?;
        Polygon::new(vertices).map_err(serde::de::Error::custom)
    }
}

impl Polygon {
    /// Validates and stores a vertex chain. Clockwise input is reversed, a
    /// repeated closing vertex is dropped.
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::Geometry(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(Error::Geometry("non-finite vertex coordinate".into()));
        }
        let signed = signed_area(&vertices);
        let diam = diameter_of(&vertices);
        if signed.abs() <= DEGENERATE_AREA * diam * diam {
            return Err(Error::Geometry(format!(
                "degenerate polygon (signed area {signed:.3e})"
            )));
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        if let Some((i, j)) = first_self_intersection(&vertices) {
            return Err(Error::Geometry(format!(
                "polygon is not simple: edges {i} and {j} intersect"
            )));
        }
        Ok(Polygon { vertices })
    }

    /// Regular `n`-gon inscribed in the circle of radius `r` about the origin,
    /// first vertex on the positive x-axis.
    pub fn regular_ngon(n: usize, r: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("n-gon needs n >= 3, got {n}")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Parameter(format!("n-gon radius must be positive, got {r}")));
        }
        let vs = (0..n)
            .map(|k| Vec2::from_angle(2.0 * PI * k as f64 / n as f64) * r)
            .collect();
        Polygon::new(vs)
    }

    /// Axis-aligned rectangle `[x0, x0+w] x [y0, y0+h]`.
    pub fn rectangle(x0: f64, y0: f64, w: f64, h: f64) -> Result<Self> {
        Polygon::new(vec![
            Vec2::new(x0, y0),
            Vec2::new(x0 + w, y0),
            Vec2::new(x0 + w, y0 + h),
            Vec2::new(x0, y0 + h),
        ])
    }

    pub fn unit_square() -> Self {
        Polygon::rectangle(0.0, 0.0, 1.0, 1.0).expect("unit square")
    }

    /// Circular sector `{ r(cos t, sin t) : 0 <= r <= radius, lo <= t <= hi }`
    /// with `arc_points` vertices on the arc (endpoints included) plus the apex.
    pub fn sector(radius: f64, lo: f64, hi: f64, arc_points: usize) -> Result<Self> {
        if arc_points < 2 || !(hi > lo) || hi - lo >= 2.0 * PI {
            return Err(Error::Parameter("sector needs arc_points >= 2 and 0 < hi - lo < 2pi".into()));
        }
        let mut vs = vec![Vec2::ZERO];
        vs.extend(arc(radius, lo, hi, arc_points));
        Polygon::new(vs)
    }

    /// Annular sector between radii `r_in < r_out`.
    pub fn annular_sector(r_in: f64, r_out: f64, lo: f64, hi: f64, arc_points: usize) -> Result<Self> {
        if !(r_in > 0.0 && r_out > r_in) {
            return Err(Error::Parameter("annular sector needs 0 < r_in < r_out".into()));
        }
        let mut vs: Vec<Vec2> = arc(r_out, lo, hi, arc_points).collect();
        let inner: Vec<Vec2> = arc(r_in, lo, hi, arc_points).collect();
        vs.extend(inner.into_iter().rev());
        Polygon::new(vs)
    }

    /// Ellipse with semi-axes `a`, `b` approximated by `n` vertices.
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self> {
        let vs = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Vec2::new(a * t.cos(), b * t.sin())
            })
            .collect();
        Polygon::new(vs)
    }

    /// L-shaped domain: the square `[0, s]^2` minus `[c, s] x [c, s]`.
    pub fn l_shape(s: f64, c: f64) -> Result<Self> {
        if !(0.0 < c && c < s) {
            return Err(Error::Parameter("L-shape needs 0 < c < s".into()));
        }
        Polygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(s, 0.0),
            Vec2::new(s, c),
            Vec2::new(c, c),
            Vec2::new(c, s),
            Vec2::new(0.0, s),
        ])
    }

    /// Convex hull (Andrew's monotone chain); collinear points are dropped.
    pub fn convex_hull(points: &[Vec2]) -> Result<Self> {
        Polygon::new(convex_hull_points(points))
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges `(v_i, v_{i+1})` in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area (positive).
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn diameter(&self) -> f64 {
        diameter_of(&self.vertices)
    }

    pub fn centroid(&self) -> Vec2 {
        let mut c = Vec2::ZERO;
        let mut a2 = 0.0;
        for (p, q) in self.edges() {
            let w = p.cross(q);
            a2 += w;
            c += (p + q) * w;
        }
        c / (3.0 * a2)
    }

    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    pub fn shortest_edge(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).fold(f64::INFINITY, f64::min)
    }

    /// Interior angle at each vertex, in radians.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let prev = self.vertices[(i + n - 1) % n];
                let cur = self.vertices[i];
                let next = self.vertices[(i + 1) % n];
                let a = prev - cur;
                let b = next - cur;
                // counterclockwise orientation: interior lies to the left
                let ang = b.cross(a).atan2(b.dot(a));
                if ang < 0.0 {
                    ang + 2.0 * PI
                } else {
                    ang
                }
            })
            .collect()
    }

    pub fn is_convex(&self) -> bool {
        self.interior_angles().iter().all(|&a| a <= PI + 1e-12)
    }

    /// Even-odd point location; points on the boundary may go either way.
    pub fn contains(&self, p: Vec2) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn distance_to_boundary(&self, p: Vec2) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Signed distance: positive inside, negative outside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        let d = self.distance_to_boundary(p);
        if self.contains(p) {
            d
        } else {
            -d
        }
    }

    /// Largest distance from a sample of interior points to the boundary.
    /// Exact for regular polygons up to the sampling resolution.
    pub fn inradius_estimate(&self, resolution: usize) -> f64 {
        let (lo, hi) = self.bounding_box();
        let mut best: f64 = 0.0;
        for i in 0..=resolution {
            for j in 0..=resolution {
                let p = Vec2::new(
                    lo.x + (hi.x - lo.x) * i as f64 / resolution as f64,
                    lo.y + (hi.y - lo.y) * j as f64 / resolution as f64,
                );
                if self.contains(p) {
                    best = best.max(self.distance_to_boundary(p));
                }
            }
        }
        best
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::Parameter(format!("scale factor must be positive, got {t}")));
        }
        Ok(Polygon { vertices: self.vertices.iter().map(|&v| v * t).collect() })
    }

    pub fn translated(&self, d: Vec2) -> Self {
        Polygon { vertices: self.vertices.iter().map(|&v| v + d).collect() }
    }

    /// Linear image `v -> (a v.x + b v.y, c v.x + d v.y)` with positive determinant.
    pub fn transformed(&self, m: [[f64; 2]; 2]) -> Result<Self> {
        Polygon::new(
            self.vertices
                .iter()
                .map(|v| Vec2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y))
                .collect(),
        )
    }

    /// Sutherland–Hodgman clip against the closed half-plane `n . x <= c`.
    /// The result is exact for convex input; for non-convex input it may
    /// contain zero-width bridges and is rejected if so.
    pub fn clip_half_plane(&self, n: Vec2, c: f64) -> Result<Self> {
        let scale = self.diameter().max(1.0);
        let tol = 1e-13 * scale;
        let mut out: Vec<Vec2> = Vec::with_capacity(self.len() + 4);
        for (a, b) in self.edges() {
            let da = n.dot(a) - c;
            let db = n.dot(b) - c;
            let a_in = da <= tol;
            if a_in {
                out.push(if da.abs() <= tol { a - n * (da / n.norm_sq()) } else { a });
            }
            if (da < -tol && db > tol) || (da > tol && db < -tol) {
                let t = da / (da - db);
                out.push(a + (b - a) * t);
            }
        }
        out.dedup_by(|p, q| p.dist(*q) <= tol);
        if out.len() > 1 && out[0].dist(out[out.len() - 1]) <= tol {
            out.pop();
        }
        remove_collinear(&mut out, tol);
        Polygon::new(out)
    }
}

fn arc(radius: f64, lo: f64, hi: f64, points: usize) -> impl Iterator<Item = Vec2> {
    (0..points).map(move |k| {
        let t = lo + (hi - lo) * k as f64 / (points - 1) as f64;
        Vec2::from_angle(t) * radius
    })
}

pub(crate) fn signed_area(vs: &[Vec2]) -> f64 {
    let n = vs.len();
    let mut s = 0.0;
    for i in 0..n {
        s += vs[i].cross(vs[(i + 1) % n]);
    }
    0.5 * s
}

fn diameter_of(vs: &[Vec2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in vs.iter().enumerate() {
        for b in &vs[i + 1..] {
            d = d.max(a.dist(*b));
        }
    }
    d
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

fn segments_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Vec2, b: Vec2, p: Vec2, d: f64| {
        d == 0.0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
    };
    on(p1, p2, q1, d1) || on(p1, p2, q2, d2) || on(q1, q2, p1, d3) || on(q1, q2, p2, d4)
}

fn first_self_intersection(vs: &[Vec2]) -> Option<(usize, usize)> {
    let n = vs.len();
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        for j in i + 1..n {
            // adjacent edges share a vertex
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (vs[j], vs[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    // adjacent edges folding back onto each other
    for i in 0..n {
        let prev = vs[(i + n - 1) % n];
        let cur = vs[i];
        let next = vs[(i + 1) % n];
        let u = prev - cur;
        let w = next - cur;
        if u.cross(w) == 0.0 && u.dot(w) > 0.0 {
            return Some(((i + n - 1) % n, i));
        }
    }
    None
}

fn remove_collinear(vs: &mut Vec<Vec2>, tol: f64) {
    let mut changed = true;
    while changed && vs.len() > 3 {
        changed = false;
        let n = vs.len();
        for i in 0..n {
            let prev = vs[(i + n - 1) % n];
            let cur = vs[i];
            let next = vs[(i + 1) % n];
            let len = prev.dist(next).max(f64::MIN_POSITIVE);
            if ((next - prev).cross(cur - prev) / len).abs() <= tol && (cur - prev).dot(next - cur) >= 0.0 {
                vs.remove(i);
                changed = true;
                break;
            }
        }
    }
}

pub(crate) fn convex_hull_points(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Vec2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && (lower[lower.len() - 1] - lower[lower.len() - 2]).cross(p - lower[lower.len() - 1]) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && (upper[upper.len() - 1] - upper[upper.len() - 2]).cross(p - upper[upper.len() - 1]) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
