//! Homogeneous weights on convex cones.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::quadrature::triangle_integral;
use crate::geometry::{ConvexCone, TriMesh, Vec2};
use crate::{Error, Result};

/// Distance from the cone boundary kept by the concavity sampler.
pub const CONCAVITY_MARGIN: f64 = 1e-3;
/// Largest tolerated violation of the concavity inequality.
pub const CONCAVITY_TOL: f64 = 1e-9;
/// Largest tolerated relative homogeneity defect.
pub const HOMOGENEITY_TOL: f64 = 1e-10;

type ScalarFn = Arc<dyn Fn(Vec2) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(Vec2) -> Vec2 + Send + Sync>;

#[derive(Clone)]
pub enum WeightKind {
    Constant(f64),
    /// `x^A1 y^A2`.
    Monomial([f64; 2]),
    /// `|x|^beta`.
    RadialPower(f64),
    Custom { name: String, value: ScalarFn, gradient: VectorFn },
}

impl std::fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightKind::Constant(c) => write!(f, "Constant({c})"),
            WeightKind::Monomial(a) => write!(f, "Monomial({}, {})", a[0], a[1]),
            WeightKind::RadialPower(b) => write!(f, "RadialPower({b})"),
            WeightKind::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// A weight `w` on a cone `Σ` with declared homogeneity degree `alpha`.
#[derive(Debug, Clone)]
pub struct HomogeneousWeight {
    kind: WeightKind,
    degree: f64,
    cone: ConvexCone,
}

impl HomogeneousWeight {
    /// `w ≡ 1` on the whole plane.
    pub fn constant() -> Self {
        HomogeneousWeight { kind: WeightKind::Constant(1.0), degree: 0.0, cone: ConvexCone::FullPlane }
    }

    /// `w ≡ 1` restricted to `cone`.
    pub fn constant_on(cone: ConvexCone) -> Self {
        HomogeneousWeight { kind: WeightKind::Constant(1.0), degree: 0.0, cone }
    }

    /// `x^A1 y^A2` on `{x_i > 0 whenever A_i > 0}`.
    pub fn monomial(a1: f64, a2: f64) -> Result<Self> {
        if !(a1 >= 0.0 && a2 >= 0.0 && a1.is_finite() && a2.is_finite()) {
            return Err(Error::Parameter(format!("monomial exponents must be >= 0, got ({a1}, {a2})")));
        }
        let cone = match (a1 > 0.0, a2 > 0.0) {
            (true, true) => ConvexCone::quadrant(),
            (true, false) => ConvexCone::sector(-0.5 * PI, 0.5 * PI)?,
            (false, true) => ConvexCone::upper_half_plane(),
            (false, false) => ConvexCone::FullPlane,
        };
        Ok(HomogeneousWeight { kind: WeightKind::Monomial([a1, a2]), degree: a1 + a2, cone })
    }

    /// `|x|^beta` on `cone`.
    pub fn radial_power(beta: f64, cone: ConvexCone) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::Parameter(format!("radial power must be >= 0, got {beta}")));
        }
        Ok(HomogeneousWeight { kind: WeightKind::RadialPower(beta), degree: beta, cone })
    }

    /// Arbitrary weight with its gradient and a declared degree, unchecked.
    pub fn custom(
        name: impl Into<String>,
        degree: f64,
        cone: ConvexCone,
        value: impl Fn(Vec2) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(Vec2) -> Vec2 + Send + Sync + 'static,
    ) -> Self {
        HomogeneousWeight {
            kind: WeightKind::Custom { name: name.into(), value: Arc::new(value), gradient: Arc::new(gradient) },
            degree,
            cone,
        }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// Homogeneity degree `alpha`.
    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn cone(&self) -> &ConvexCone {
        &self.cone
    }

    /// Same weight, declared on another cone.
    pub fn with_cone(mut self, cone: ConvexCone) -> Self {
        self.cone = cone;
        self
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, WeightKind::Constant(_))
    }

    pub fn label(&self) -> String {
        match &self.kind {
            WeightKind::Constant(c) if *c == 1.0 => "1".into(),
            WeightKind::Constant(c) => format!("{c}"),
            WeightKind::Monomial([a, b]) => format!("x^{a} y^{b}"),
            WeightKind::RadialPower(b) => format!("|x|^{b}"),
            WeightKind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn value(&self, x: Vec2) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => *c,
            WeightKind::Monomial([a1, a2]) => pow0(x.x, *a1) * pow0(x.y, *a2),
            WeightKind::RadialPower(b) => pow0(x.norm(), *b),
            WeightKind::Custom { value, .. } => value(x),
        }
    }

    pub fn gradient(&self, x: Vec2) -> Vec2 {
        match &self.kind {
            WeightKind::Constant(_) => Vec2::ZERO,
            WeightKind::Monomial([a1, a2]) => Vec2::new(
                dpow0(x.x, *a1) * pow0(x.y, *a2),
                pow0(x.x, *a1) * dpow0(x.y, *a2),
            ),
            WeightKind::RadialPower(b) => {
                let r = x.norm();
                if r == 0.0 {
                    Vec2::ZERO
                } else {
                    x * (b * r.powf(b - 2.0))
                }
            }
            WeightKind::Custom { gradient, .. } => gradient(x),
        }
    }

    /// Whether `w` vanishes on both boundary rays of its cone.
    pub fn vanishes_on_cone_boundary(&self) -> bool {
        match self.cone.rays() {
            None => false,
            Some((lo, hi)) => {
                let scale = self.value(self.cone.bisector()).abs().max(f64::MIN_POSITIVE);
                self.value(lo).abs() <= 1e-14 * scale && self.value(hi).abs() <= 1e-14 * scale
            }
        }
    }
}

/// `t^a` for `t >= 0` with `0^0 = 1`; negative `t` is clamped to 0.
fn pow0(t: f64, a: f64) -> f64 {
    if a == 0.0 {
        1.0
    } else if a == 1.0 {
        t.max(0.0)
    } else if a == 2.0 {
        let s = t.max(0.0);
        s * s
    } else {
        t.max(0.0).powf(a)
    }
}

fn dpow0(t: f64, a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else if a == 1.0 {
        1.0
    } else {
        a * pow0(t, a - 1.0)
    }
}

/// Uniform point of `Σ ∩ B_1` at distance at least `margin` from `∂Σ`.
pub(crate) fn sample_in_cone(cone: &ConvexCone, margin: f64, rng: &mut ChaCha8Rng) -> Vec2 {
    loop {
        let r = rng.gen::<f64>().sqrt();
        let p = match *cone {
            ConvexCone::FullPlane => Vec2::from_angle(rng.gen_range(0.0..2.0 * PI)) * r,
            ConvexCone::Sector { theta_lo, theta_hi } => Vec2::from_angle(rng.gen_range(theta_lo..theta_hi)) * r,
        };
        if r > margin && cone.boundary_distance(p) >= margin {
            return p;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcavityReport {
    pub samples: usize,
    pub degree: f64,
    /// `max [alpha (w(z)/w(x))^(1/alpha) - grad w(x).z / w(x)]`.
    pub max_violation: f64,
    /// Worst pair `(x, z)` when the check fails.
    pub witness: Option<(Vec2, Vec2)>,
    pub pass: bool,
}

/// Tests `alpha (w(z)/w(x))^(1/alpha) <= grad w(x).z / w(x)` on `k` seeded
/// pairs of `Σ ∩ B_1` kept [`CONCAVITY_MARGIN`] away from `∂Σ`. This is
/// equivalent to concavity of `w^(1/alpha)` on `Σ`.
pub fn concavity_check(w: &HomogeneousWeight, k: usize, seed: u64) -> Result<ConcavityReport> {
    let alpha = w.degree();
    if alpha == 0.0 {
        return Ok(ConcavityReport { samples: 0, degree: 0.0, max_violation: 0.0, witness: None, pass: true });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut witness = (Vec2::ZERO, Vec2::ZERO);
    for _ in 0..k {
        let x = sample_in_cone(w.cone(), CONCAVITY_MARGIN, &mut rng);
        let z = sample_in_cone(w.cone(), CONCAVITY_MARGIN, &mut rng);
        let (wx, wz) = (w.value(x), w.value(z));
        if !(wx > 0.0) || !(wz > 0.0) {
            let bad = if wx > 0.0 { z } else { x };
            return Err(Error::Weight(format!("w <= 0 at ({:.6}, {:.6}) inside the cone", bad.x, bad.y)));
        }
        let lhs = alpha * (wz / wx).powf(1.0 / alpha);
        let rhs = w.gradient(x).dot(z) / wx;
        if lhs - rhs > worst {
            worst = lhs - rhs;
            witness = (x, z);
        }
    }
    let pass = worst <= CONCAVITY_TOL;
    Ok(ConcavityReport {
        samples: k,
        degree: alpha,
        max_violation: worst,
        witness: if pass { None } else { Some(witness) },
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HomogeneityReport {
    pub samples: usize,
    pub degree: f64,
    pub max_relative_error: f64,
    pub pass: bool,
}

/// Largest `|w(tx) - t^alpha w(x)| / (t^alpha w(x))` for `t in {0.5, 2, 7}`.
pub fn homogeneity_check(w: &HomogeneousWeight, samples: usize, seed: u64) -> HomogeneityReport {
    let alpha = w.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = sample_in_cone(w.cone(), CONCAVITY_MARGIN, &mut rng);
        let wx = w.value(x);
        for t in [0.5_f64, 2.0, 7.0] {
            let expect = t.powf(alpha) * wx;
            let err = (w.value(x * t) - expect).abs() / expect.abs();
            worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
        }
    }
    HomogeneityReport { samples, degree: alpha, max_relative_error: worst, pass: worst <= HOMOGENEITY_TOL }
}

/// `w(Ω ∩ Σ)` by the 6-point rule on every triangle, with one level of
/// subdivision on triangles touching `∂Σ`.
pub fn weighted_measure(mesh: &TriMesh, w: &HomogeneousWeight) -> Result<f64> {
    let cone = w.cone();
    let scale = mesh.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-12 * scale;
    let mut total = 0.0;
    for t in 0..mesh.triangles().len() {
        let p = mesh.triangle_points(t);
        if cone.is_full_plane() || w.is_constant() && p.iter().all(|&q| cone.contains_closed(q, tol)) {
            total += triangle_integral(p, |x| w.value(x));
            continue;
        }
        if let Some(q) = p.iter().find(|&&q| !cone.contains_closed(q, tol)) {
            return Err(Error::Geometry(format!(
                "mesh vertex ({:.6}, {:.6}) lies outside the weight's cone",
                q.x, q.y
            )));
        }
        let touches = p.iter().any(|&q| cone.boundary_distance(q) <= tol);
        if touches {
            total += subdivide(p).iter().map(|s| triangle_integral(*s, |x| w.value(x))).sum::<f64>();
        } else {
            total += triangle_integral(p, |x| w.value(x));
        }
    }
    Ok(total)
}

fn subdivide(p: [Vec2; 3]) -> [[Vec2; 3]; 4] {
    let m01 = (p[0] + p[1]) * 0.5;
    let m12 = (p[1] + p[2]) * 0.5;
    let m20 = (p[2] + p[0]) * 0.5;
    [[p[0], m01, m20], [m01, p[1], m12], [m20, m12, p[2]], [m01, m12, m20]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{triangulate, Polygon};

    #[test]
    fn monomial_cones() {
        assert_eq!(*HomogeneousWeight::monomial(1.0, 1.0).unwrap().cone(), ConvexCone::quadrant());
        assert_eq!(*HomogeneousWeight::monomial(0.0, 2.0).unwrap().cone(), ConvexCone::upper_half_plane());
        assert!(HomogeneousWeight::monomial(0.0, 0.0).unwrap().cone().is_full_plane());
        assert!(HomogeneousWeight::monomial(-1.0, 0.0).is_err());
    }

    #[test]
    fn concavity_examples() {
        let xy = HomogeneousWeight::monomial(1.0, 1.0).unwrap();
        assert!(concavity_check(&xy, 5000, 1).unwrap().pass);
        let r2 = HomogeneousWeight::radial_power(2.0, ConvexCone::quadrant()).unwrap();
        let rep = concavity_check(&r2, 5000, 1).unwrap();
        assert!(!rep.pass);
        let (x, z) = rep.witness.unwrap();
        // 2|z|/|x| > 2 x.z/|x|^2 unless x and z are parallel
        assert!(2.0 * z.norm() / x.norm() > 2.0 * x.dot(z) / x.norm_sq());
        assert!(concavity_check(&HomogeneousWeight::constant(), 10, 1).unwrap().pass);
    }

    #[test]
    fn homogeneity_examples() {
        let m = HomogeneousWeight::monomial(1.5, 0.5).unwrap();
        let r = homogeneity_check(&m, 500, 3);
        assert!(r.pass && r.degree == 2.0);
        let bad = HomogeneousWeight::custom("xy+1", 2.0, ConvexCone::quadrant(), |p| p.x * p.y + 1.0, |p| Vec2::new(p.y, p.x));
        assert!(!homogeneity_check(&bad, 50, 3).pass);
        assert!(homogeneity_check(&HomogeneousWeight::constant(), 50, 3).pass);
    }

    #[test]
    fn measure_of_unit_square() {
        let m = triangulate(&Polygon::unit_square(), 0.1).unwrap();
        let v = weighted_measure(&m, &HomogeneousWeight::constant()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measure_rejects_outside_triangles() {
        let m = triangulate(&Polygon::rectangle(-1.0, 0.1, 2.0, 1.0).unwrap(), 0.2).unwrap();
        let w = HomogeneousWeight::monomial(1.0, 1.0).unwrap();
        assert!(matches!(weighted_measure(&m, &w), Err(Error::Geometry(_))));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let ws = [
            HomogeneousWeight::monomial(1.5, 0.5).unwrap(),
            HomogeneousWeight::radial_power(3.0, ConvexCone::quadrant()).unwrap(),
        ];
        let x = Vec2::new(0.4, 0.7);
        let e = 1e-6;
        for w in &ws {
            let g = w.gradient(x);
            let gx = (w.value(x + Vec2::new(e, 0.0)) - w.value(x - Vec2::new(e, 0.0))) / (2.0 * e);
            let gy = (w.value(x + Vec2::new(0.0, e)) - w.value(x - Vec2::new(0.0, e))) / (2.0 * e);
            assert!((g.x - gx).abs() < 1e-7 && (g.y - gy).abs() < 1e-7);
        }
    }
}
