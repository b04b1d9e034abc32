use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quotient::{cone_report, isoperimetric_report, wulff_report, QuotientReport};
use super::trace::{abp_trace, TraceSpec};
use crate::abp::Certificate;
use crate::config::{ConeSpec, DomainSpec, GaugeSpec, WeightSpec};
use crate::geometry::{ConvexCone, Polygon, Vec2};
use crate::pde::SolverConfig;
use crate::{Error, Result, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Iso,
    Wulff,
    Cone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub theorem: Theorem,
    pub domain: DomainSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }

    pub fn of(&self, theorem: Theorem) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(move |e| e.theorem == theorem)
    }
}

/// Convex hull of `k` seeded uniform points of `[x0, x0+s] × [y0, y0+s]`.
pub fn random_hull(k: usize, x0: f64, y0: f64, s: f64, seed: u64) -> Result<Polygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec2> = (0..k).map(|_| Vec2::new(x0 + s * rng.gen::<f64>(), y0 + s * rng.gen::<f64>())).collect();
    Polygon::convex_hull(&pts)
}

fn entry(name: String, theorem: Theorem, poly: &Polygon) -> CorpusEntry {
    CorpusEntry { name, theorem, domain: DomainSpec::from_polygon(poly) }
}

fn full_plane_shapes() -> Result<Vec<(String, Polygon)>> {
    let mut v = Vec::new();
    for n in [3, 4, 5, 6, 7, 8, 10, 12, 16, 32, 64, 512] {
        v.push((format!("ngon{n}"), Polygon::regular_ngon(n, 1.0)?));
    }
    for (a, b) in [(1.5, 1.0), (2.0, 1.0), (3.0, 1.0), (4.0, 1.0)] {
        v.push((format!("rect{a}x{b}"), Polygon::rectangle(-a / 2.0, -b / 2.0, a, b)?));
    }
    v.push(("ellipse2to1".into(), Polygon::ellipse(1.0, 0.5, 64)?));
    for (s, c) in [(1.0, 0.5), (1.0, 0.3), (1.5, 0.75)] {
        v.push((format!("lshape{s}_{c}"), Polygon::l_shape(s, c)?));
    }
    for k in 0..10 {
        v.push((format!("hull{k}"), random_hull(12, -1.0, -1.0, 2.0, DEFAULT_SEED + k)?));
    }
    Ok(v)
}

fn quadrant_shapes() -> Result<Vec<(String, Polygon)>> {
    let q = ConvexCone::quadrant();
    let mut v = vec![
        ("quarter_disc".to_string(), Polygon::sector(1.0, 0.0, PI / 2.0, 128)?),
        ("eighth_disc".into(), Polygon::sector(1.0, 0.0, PI / 4.0, 64)?),
        ("unit_square".into(), Polygon::unit_square()),
        ("rect2x1".into(), Polygon::rectangle(0.0, 0.0, 2.0, 1.0)?),
        ("rect1x3".into(), Polygon::rectangle(0.0, 0.0, 1.0, 3.0)?),
        ("corner_triangle".into(), Polygon::new(vec![Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)])?),
        ("quarter_annulus".into(), Polygon::annular_sector(0.5, 1.0, 0.0, PI / 2.0, 64)?),
        ("hexagon_clipped".into(), q.clip(&Polygon::regular_ngon(6, 1.0)?)?),
        ("lshape_corner".into(), q.clip(&Polygon::l_shape(1.0, 0.5)?.translated(Vec2::new(-0.25, -0.25)))?),
        ("disc_inside".into(), Polygon::regular_ngon(64, 0.5)?.translated(Vec2::new(0.75, 0.75))),
    ];
    for k in 0..4 {
        v.push((format!("qhull{k}"), random_hull(12, 0.0, 0.0, 1.0, DEFAULT_SEED + 100 + k)?));
    }
    Ok(v)
}

/// The fixed test corpus: full-plane shapes for the classical and Wulff
/// theorems and quadrant shapes for three weights.
pub fn default_corpus() -> Result<Corpus> {
    let mut entries = Vec::new();
    let full = full_plane_shapes()?;
    for (name, p) in &full {
        entries.push(entry(format!("iso_{name}"), Theorem::Iso, p));
    }
    for gauge in ["l1", "linf"] {
        for (name, p) in &full {
            let mut e = entry(format!("wulff_{gauge}_{name}"), Theorem::Wulff, p);
            e.domain.gauge = GaugeSpec::Named(gauge.into());
            entries.push(e);
        }
    }
    let quadrant = ConeSpec { theta_lo: 0.0, theta_hi: PI / 2.0 };
    for (label, weight) in [("one", None), ("xy", Some(WeightSpec::monomial(1.0, 1.0))), ("x1.5y0.5", Some(WeightSpec::monomial(1.5, 0.5)))] {
        for (name, p) in quadrant_shapes()? {
            let mut e = entry(format!("cone_{label}_{name}"), Theorem::Cone, &p);
            e.domain.cone = Some(quadrant);
            e.domain.weight = weight.clone();
            entries.push(e);
        }
    }
    Ok(Corpus { entries })
}

/// Quotient report of one entry under its theorem.
pub fn entry_report(e: &CorpusEntry) -> Result<QuotientReport> {
    let poly = e.domain.polygon()?;
    let rep = match e.theorem {
        Theorem::Iso => isoperimetric_report(&poly)?,
        Theorem::Wulff => wulff_report(&poly, &e.domain.gauge()?)?,
        Theorem::Cone => cone_report(&poly, &e.domain.cone()?, &e.domain.weight()?, &e.domain.gauge()?)?,
    };
    Ok(rep.meta("name", &e.name))
}

/// ABP trace of one entry.
pub fn entry_trace(e: &CorpusEntry, solver: &SolverConfig, samples: usize, seed: u64) -> Result<Certificate> {
    let mut spec = TraceSpec::classical(e.domain.polygon()?);
    spec.cone = e.domain.cone()?;
    spec.weight = e.domain.weight()?;
    spec.gauge = e.domain.gauge()?;
    spec.solver = *solver;
    spec.samples = samples;
    spec.seed = seed;
    let mut cert = abp_trace(&spec);
    cert.meta("name", &e.name);
    Ok(cert)
}

/// Reports for all entries, computed in parallel and returned in order.
pub fn corpus_reports(corpus: &Corpus) -> Vec<(String, Result<QuotientReport>)> {
    corpus.entries.par_iter().map(|e| (e.name.clone(), entry_report(e))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition() {
        let c = default_corpus().unwrap();
        assert!(c.of(Theorem::Iso).count() >= 30);
        assert!(c.of(Theorem::Wulff).count() >= 30);
        assert!(c.of(Theorem::Cone).count() >= 30);
        let names: std::collections::BTreeSet<_> = c.entries.iter().map(|e| &e.name).collect();
        assert_eq!(names.len(), c.entries.len());
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let c = default_corpus().unwrap();
        assert_eq!(Corpus::from_json(&c.to_json()).unwrap(), c);
    }
}
