use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;
use serde_json::Value;

use crate::abp::Certificate;
use crate::geometry::quadrature::graded_integral;
use crate::geometry::{
    ball_constants, gauge_check, perimeter_weighted, triangulate, wulff_shape, ConvexCone, Gauge, Polygon, Vec2,
};
use crate::weights::{concavity_check, weighted_measure, HomogeneousWeight};
use crate::{Error, Result, DEFAULT_SEED};

/// Directions used to polygonize the Euclidean Wulff shape when needed.
pub const WULFF_DIRECTIONS: usize = 512;
/// Relative tolerance of [`wulff_identity_check`].
pub const IDENTITY_TOL: f64 = 1e-4;
/// Seeded pairs drawn by the concavity hypothesis check.
pub const CONCAVITY_SAMPLES: usize = 4000;
/// Discretization slack on the deficit of a valid run.
pub const DEFICIT_TOL: f64 = 1e-3;
/// Cells per diameter of the meshes used for weighted measures.
const MEASURE_CELLS: f64 = 64.0;

/// `P / M^{(D-1)/D}` of a domain against the optimal value.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientReport {
    pub perimeter: f64,
    pub measure: f64,
    pub exponent: f64,
    #[serde(rename = "D")]
    pub dimension: f64,
    pub quotient: f64,
    pub reference: f64,
    pub deficit: f64,
    pub metadata: BTreeMap<String, Value>,
}

impl QuotientReport {
    fn new(perimeter: f64, measure: f64, dimension: f64, reference: f64) -> Self {
        let exponent = (dimension - 1.0) / dimension;
        let quotient = perimeter / measure.powf(exponent);
        QuotientReport {
            perimeter,
            measure,
            exponent,
            dimension,
            quotient,
            reference,
            deficit: quotient - reference,
            metadata: BTreeMap::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl Serialize) -> Self {
        self.metadata.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn to_json(&self) -> String {
        crate::report::to_json(self)
    }

    /// `deficit ≥ −`[`DEFICIT_TOL`].
    pub fn holds(&self) -> bool {
        self.deficit >= -DEFICIT_TOL
    }
}

/// Angular range `[lo, hi]` of a cone, `[0, 2π]` for the plane.
fn angular_range(cone: &ConvexCone) -> (f64, f64) {
    match *cone {
        ConvexCone::FullPlane => (0.0, 2.0 * PI),
        ConvexCone::Sector { theta_lo, theta_hi } => (theta_lo, theta_hi),
    }
}

/// `(P_w(B_1; Σ), w(B_1 ∩ Σ))` by polar quadrature on the exact ball.
pub fn ball_sector_reference(w: &HomogeneousWeight, cone: &ConvexCone) -> (f64, f64) {
    let (lo, hi) = angular_range(cone);
    let on_circle = |t: f64| w.value(Vec2::from_angle(t));
    let perimeter = graded_integral(lo, hi, on_circle);
    let measure = graded_integral(lo, hi, |t| {
        let e = Vec2::from_angle(t);
        graded_integral(0.0, 1.0, |r| w.value(e * r) * r)
    });
    (perimeter, measure)
}

/// `w(P)` for a polygon inside the closed cone of `w`.
pub fn polygon_weighted_measure(poly: &Polygon, w: &HomogeneousWeight) -> Result<f64> {
    if w.is_constant() {
        return Ok(poly.area() * w.value(Vec2::ZERO));
    }
    let mesh = triangulate(poly, poly.diameter() / MEASURE_CELLS)?;
    weighted_measure(&mesh, w)
}

/// `(P_{w,H}(W; Σ), w(W ∩ Σ))` for the Wulff shape of `h`.
pub fn wulff_reference(h: &Gauge, w: &HomogeneousWeight, cone: &ConvexCone) -> Result<(f64, f64)> {
    if h.is_euclidean() {
        return Ok(ball_sector_reference(w, cone));
    }
    let shape = wulff_shape(h, WULFF_DIRECTIONS)?;
    let clipped = shape.clipped(cone)?;
    Ok((perimeter_weighted(&clipped, cone, h, w)?, polygon_weighted_measure(&clipped, w)?))
}

/// `P(Ω)/|Ω|^{1/2}` against the ball value `2√π`.
pub fn isoperimetric_report(poly: &Polygon) -> Result<QuotientReport> {
    let (ball_vol, ball_per) = ball_constants(2)?;
    let reference = ball_per / ball_vol.sqrt();
    Ok(QuotientReport::new(poly.perimeter(), poly.area(), 2.0, reference).meta("theorem", "isoperimetric"))
}

/// `P_H(Ω)/|Ω|^{1/2}` against the Wulff shape of `h`.
pub fn wulff_report(poly: &Polygon, h: &Gauge) -> Result<QuotientReport> {
    let check = gauge_check(h);
    if check.degenerate {
        return Err(Error::DegenerateGauge(
            "the gauge vanishes on some direction; use cone_report with an explicit cone".into(),
        ));
    }
    if !check.pass {
        return Err(Error::Gauge(format!(
            "gauge is not convex and positive (sublinearity {:.3e}, negativity {:.3e})",
            check.worst_sublinearity, check.worst_negativity
        )));
    }
    let one = HomogeneousWeight::constant();
    let full = ConvexCone::FullPlane;
    let perimeter = perimeter_weighted(poly, &full, h, &one)?;
    let (pw, mw) = wulff_reference(h, &one, &full)?;
    Ok(QuotientReport::new(perimeter, poly.area(), 2.0, pw / mw.sqrt())
        .meta("theorem", "wulff")
        .meta("wulff_perimeter", pw)
        .meta("wulff_area", mw))
}

/// Certifies `P_{w,H}(W; Σ) = D w(W ∩ Σ)`.
pub fn wulff_identity_check(h: &Gauge, cone: &ConvexCone, w: &HomogeneousWeight) -> Result<Certificate> {
    if !cone.is_full_plane() && !w.vanishes_on_cone_boundary() {
        return Err(Error::Hypothesis(format!(
            "weight {} does not vanish on the cone boundary; the identity is only asserted when it does",
            w.label()
        )));
    }
    let w = w.clone().with_cone(*cone);
    let (per, meas) = wulff_reference(h, &w, cone)?;
    if !(meas > 0.0) {
        return Err(Error::Precondition("the Wulff shape does not meet the cone".into()));
    }
    let d = 2.0 + w.degree();
    let rel = (per - d * meas).abs() / (d * meas);
    let mut cert = Certificate::new("wulff identity");
    cert.push("perimeter_equals_D_measure", rel, 0.0, IDENTITY_TOL);
    cert.meta("perimeter", per);
    cert.meta("measure", meas);
    cert.meta("D", d);
    cert.meta("weight", w.label());
    Ok(cert)
}

/// `P_{w,H}(Ω; Σ)/w(Ω)^{(D-1)/D}` against `W ∩ Σ`. The polygon must already
/// be clipped to `Σ` and `w^{1/α}` must be concave on `Σ`.
pub fn cone_report(poly: &Polygon, cone: &ConvexCone, w: &HomogeneousWeight, h: &Gauge) -> Result<QuotientReport> {
    let w = w.clone().with_cone(*cone);
    let concavity = concavity_check(&w, CONCAVITY_SAMPLES, DEFAULT_SEED)?;
    if !concavity.pass {
        return Err(Error::Hypothesis(format!(
            "w^(1/alpha) is not concave on the cone for w = {} (violation {:.3e} at {:?})",
            w.label(),
            concavity.max_violation,
            concavity.witness
        )));
    }
    let d = 2.0 + w.degree();
    let perimeter = perimeter_weighted(poly, cone, h, &w)?;
    let measure = polygon_weighted_measure(poly, &w)?;
    let (pw, mw) = wulff_reference(h, &w, cone)?;
    let reference = pw / mw.powf((d - 1.0) / d);
    Ok(QuotientReport::new(perimeter, measure, d, reference)
        .meta("theorem", "weighted cone")
        .meta("weight", w.label())
        .meta("reference_perimeter", pw)
        .meta("reference_measure", mw))
}
