//! JSON formats for domains, weights, gauges and solver settings.

use serde::{Deserialize, Serialize};

use crate::geometry::{ConvexCone, Gauge, Polygon, Vec2};
use crate::pde::SolverConfig;
use crate::weights::HomogeneousWeight;
use crate::{Error, Result};

/// Sample directions used for the named polyhedral gauges.
pub const NAMED_GAUGE_DIRECTIONS: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NgonSpec {
    pub n: usize,
    pub r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub theta_lo: f64,
    pub theta_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GaugeSpec {
    /// `"euclidean"`, `"l1"` or `"linf"`.
    Named(String),
    /// `(νx, νy, H)` triples.
    Samples { samples: Vec<[f64; 3]> },
}

impl Default for GaugeSpec {
    fn default() -> Self {
        GaugeSpec::Named("euclidean".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKindSpec {
    Constant,
    Monomial([f64; 2]),
    Radialpower(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub kind: WeightKindSpec,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec { kind: WeightKindSpec::Constant }
    }
}

/// A domain file: exactly one of `polygon` and `ngon`, an optional cone
/// (`null` is the plane), gauge, weight and solver block.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ngon: Option<NgonSpec>,
    #[serde(default)]
    pub cone: Option<ConeSpec>,
    #[serde(default)]
    pub gauge: GaugeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverConfig>,
}

impl DomainSpec {
    pub fn from_polygon(poly: &Polygon) -> Self {
        DomainSpec { polygon: Some(poly.vertices().iter().map(|v| [v.x, v.y]).collect()), ..Default::default() }
    }

    pub fn polygon(&self) -> Result<Polygon> {
        match (&self.polygon, &self.ngon) {
            (Some(pts), None) => Polygon::new(pts.iter().map(|p| Vec2::new(p[0], p[1])).collect()),
            (None, Some(ng)) => {
                let p = Polygon::regular_ngon(ng.n, ng.r)?;
                Ok(match ng.center {
                    Some(c) => p.translated(Vec2::new(c[0], c[1])),
                    None => p,
                })
            }
            (Some(_), Some(_)) => Err(Error::Config("give either \"polygon\" or \"ngon\", not both".into())),
            (None, None) => Err(Error::Config("domain needs \"polygon\" or \"ngon\"".into())),
        }
    }

    pub fn cone(&self) -> Result<ConvexCone> {
        match self.cone {
            None => Ok(ConvexCone::FullPlane),
            Some(c) => ConvexCone::sector(c.theta_lo, c.theta_hi),
        }
    }

    pub fn gauge(&self) -> Result<Gauge> {
        match &self.gauge {
            GaugeSpec::Named(name) => match name.as_str() {
                "euclidean" => Ok(Gauge::euclidean()),
                "l1" => Gauge::l1(NAMED_GAUGE_DIRECTIONS),
                "linf" => Gauge::linf(NAMED_GAUGE_DIRECTIONS),
                other => Err(Error::Config(format!("unknown gauge \"{other}\""))),
            },
            GaugeSpec::Samples { samples } => {
                Gauge::from_samples(samples.iter().map(|s| (Vec2::new(s[0], s[1]), s[2])).collect())
            }
        }
    }

    /// The weight on the domain's cone; `w ≡ 1` when absent.
    pub fn weight(&self) -> Result<HomogeneousWeight> {
        let cone = self.cone()?;
        let spec = self.weight.clone().unwrap_or_default();
        let w = match spec.kind {
            WeightKindSpec::Constant => HomogeneousWeight::constant(),
            WeightKindSpec::Monomial([a, b]) => HomogeneousWeight::monomial(a, b)?,
            WeightKindSpec::Radialpower(beta) => HomogeneousWeight::radial_power(beta, cone)?,
        };
        Ok(w.with_cone(cone))
    }

    pub fn solver(&self) -> SolverConfig {
        self.solver.unwrap_or_default()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }
}

impl WeightSpec {
    pub fn monomial(a: f64, b: f64) -> Self {
        WeightSpec { kind: WeightKindSpec::Monomial([a, b]) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ngon_with_null_cone() {
        let d = DomainSpec::from_json(r#"{"ngon": {"n": 6, "r": 2.0}, "cone": null, "gauge": "euclidean"}"#).unwrap();
        assert_eq!(d.polygon().unwrap().len(), 6);
        assert!(d.cone().unwrap().is_full_plane());
    }

    #[test]
    fn parses_weight_and_samples() {
        let d = DomainSpec::from_json(
            r#"{"polygon": [[0,0],[1,0],[1,1],[0,1]],
                "cone": {"theta_lo": 0.0, "theta_hi": 1.5707963267948966},
                "gauge": {"samples": [[1,0,1],[0,1,1],[-1,0,1],[0,-1,1]]},
                "weight": {"kind": {"monomial": [1, 1]}}}"#,
        )
        .unwrap();
        assert_eq!(d.weight().unwrap().degree(), 2.0);
        assert!(!d.gauge().unwrap().is_euclidean());
        let w = DomainSpec::from_json(r#"{"ngon": {"n": 4, "r": 1}, "weight": {"kind": "constant"}}"#).unwrap();
        assert!(w.weight().unwrap().is_constant());
    }

    #[test]
    fn errors_carry_location() {
        let e = DomainSpec::from_json("{\"ngon\": {\"n\": 4,\n \"radius\": 1}}").unwrap_err();
        assert!(matches!(e, Error::Config(ref m) if m.contains("line 2")), "{e}");
        assert!(DomainSpec::from_json("{}").unwrap().polygon().is_err());
    }
}
