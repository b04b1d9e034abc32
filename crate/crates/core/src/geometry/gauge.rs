use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::Vec2;
use crate::{Error, Result};

/// Tolerance of the sampled convexity and sign checks.
pub const GAUGE_CHECK_TOL: f64 = 1e-12;

/// A surface tension `H`: nonnegative, positively 1-homogeneous and convex.
///
/// The Euclidean norm is evaluated exactly. Every other gauge is stored as
/// support values `H(nu_k)` on unit directions sorted by angle and extended
/// to the plane by conic interpolation: if `v = s nu_k + t nu_{k+1}` with
/// `s, t >= 0` then `H(v) = s H(nu_k) + t H(nu_{k+1})`.
#[derive(Clone)]
pub struct Gauge {
    kind: GaugeKind,
}

#[derive(Clone)]
enum GaugeKind {
    Euclidean,
    Sampled(Arc<Samples>),
}

struct Samples {
    angles: Vec<f64>,
    dirs: Vec<Vec2>,
    values: Vec<f64>,
}

impl std::fmt::Debug for Gauge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            GaugeKind::Euclidean => write!(f, "Gauge::Euclidean"),
            GaugeKind::Sampled(s) => write!(f, "Gauge::Sampled({} directions)", s.dirs.len()),
        }
    }
}

impl Gauge {
    pub fn euclidean() -> Self {
        Gauge { kind: GaugeKind::Euclidean }
    }

    /// Samples `f` on `m` equally spaced unit directions starting at angle 0.
    pub fn from_fn(m: usize, f: impl Fn(Vec2) -> f64) -> Result<Self> {
        let samples = (0..m)
            .map(|k| {
                let nu = Vec2::from_angle(2.0 * PI * k as f64 / m as f64);
                (nu, f(nu))
            })
            .collect();
        Gauge::from_samples(samples)
    }

    /// Builds a sampled gauge from `(nu, H(nu))` pairs. Directions need not be
    /// unit; values are rescaled by `1/|nu|`.
    pub fn from_samples(samples: Vec<(Vec2, f64)>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::Gauge("need at least 3 sample directions".into()));
        }
        let mut rows: Vec<(f64, Vec2, f64)> = Vec::with_capacity(samples.len());
        for (nu, h) in samples {
            let n = nu.norm();
            if !(n > 0.0) || !h.is_finite() {
                return Err(Error::Gauge(format!("invalid sample ({}, {}) -> {h}", nu.x, nu.y)));
            }
            let u = nu / n;
            let a = u.angle().rem_euclid(2.0 * PI);
            rows.push((a, u, h / n));
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        rows.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14);
        let m = rows.len();
        for k in 0..m {
            let next = if k + 1 < m { rows[k + 1].0 } else { rows[0].0 + 2.0 * PI };
            if next - rows[k].0 >= PI - 1e-12 {
                return Err(Error::Gauge("sample directions leave an angular gap >= pi".into()));
            }
        }
        Ok(Gauge {
            kind: GaugeKind::Sampled(Arc::new(Samples {
                angles: rows.iter().map(|r| r.0).collect(),
                dirs: rows.iter().map(|r| r.1).collect(),
                values: rows.iter().map(|r| r.2).collect(),
            })),
        })
    }

    /// `H(nu) = |nu_1| + |nu_2|`; its Wulff shape is the square `[-1, 1]^2`.
    pub fn l1(m: usize) -> Result<Self> {
        Gauge::from_fn(m, |v| v.x.abs() + v.y.abs())
    }

    /// `H(nu) = max(|nu_1|, |nu_2|)`; its Wulff shape is the diamond `|p_1| + |p_2| <= 1`.
    pub fn linf(m: usize) -> Result<Self> {
        Gauge::from_fn(m, |v| v.x.abs().max(v.y.abs()))
    }

    /// Support function `H(nu) = max_k p_k . nu` of the convex hull of `points`.
    pub fn support_of(points: &[Vec2], m: usize) -> Result<Self> {
        Gauge::from_fn(m, |nu| points.iter().map(|p| p.dot(nu)).fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self.kind, GaugeKind::Euclidean)
    }

    /// Sample directions and values; the Euclidean gauge reports `m` samples.
    pub fn samples(&self, m: usize) -> Vec<(Vec2, f64)> {
        match &self.kind {
            GaugeKind::Euclidean => (0..m)
                .map(|k| (Vec2::from_angle(2.0 * PI * k as f64 / m as f64), 1.0))
                .collect(),
            GaugeKind::Sampled(s) => s.dirs.iter().copied().zip(s.values.iter().copied()).collect(),
        }
    }

    pub fn sample_count(&self) -> Option<usize> {
        match &self.kind {
            GaugeKind::Euclidean => None,
            GaugeKind::Sampled(s) => Some(s.dirs.len()),
        }
    }

    /// Evaluates the 1-homogeneous extension at any vector.
    pub fn eval(&self, v: Vec2) -> f64 {
        match &self.kind {
            GaugeKind::Euclidean => v.norm(),
            GaugeKind::Sampled(s) => {
                if v.x == 0.0 && v.y == 0.0 {
                    return 0.0;
                }
                let a = v.angle().rem_euclid(2.0 * PI);
                let m = s.angles.len();
                // index of the last sample angle <= a (cyclically)
                let k = match s.angles.partition_point(|&t| t <= a) {
                    0 => m - 1,
                    i => i - 1,
                };
                let j = (k + 1) % m;
                let (nk, nj) = (s.dirs[k], s.dirs[j]);
                let det = nk.cross(nj);
                let sk = v.cross(nj) / det;
                let tj = nk.cross(v) / det;
                sk * s.values[k] + tj * s.values[j]
            }
        }
    }
}

/// Outcome of [`gauge_check`].
#[derive(Debug, Clone, Serialize)]
pub struct GaugeReport {
    pub pairs_checked: usize,
    /// `max (H(a + b) - H(a) - H(b))` over sampled pairs.
    pub worst_sublinearity: f64,
    /// `max (-H(nu))` over samples.
    pub worst_negativity: f64,
    /// The gauge vanishes on some sampled direction.
    pub degenerate: bool,
    pub pass: bool,
}

/// Checks nonnegativity and sublinearity of `H` on all pairs of sample
/// directions (360 directions for the Euclidean gauge).
pub fn gauge_check(h: &Gauge) -> GaugeReport {
    let samples = h.samples(360);
    let mut worst_sub = f64::NEG_INFINITY;
    let mut worst_neg = f64::NEG_INFINITY;
    let mut degenerate = false;
    for &(_, val) in &samples {
        worst_neg = worst_neg.max(-val);
        if val <= GAUGE_CHECK_TOL {
            degenerate = true;
        }
    }
    for (i, &(a, ha)) in samples.iter().enumerate() {
        for &(b, hb) in &samples[i..] {
            worst_sub = worst_sub.max(h.eval(a + b) - ha - hb);
        }
    }
    let n = samples.len();
    GaugeReport {
        pairs_checked: n * (n + 1) / 2,
        worst_sublinearity: worst_sub,
        worst_negativity: worst_neg,
        degenerate,
        pass: worst_sub <= GAUGE_CHECK_TOL && worst_neg <= GAUGE_CHECK_TOL,
    }
}
