use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::quotient::wulff_reference;
use crate::abp::Certificate;
use crate::geometry::{ConvexCone, Gauge, Vec2};
use crate::weights::HomogeneousWeight;
use crate::{Error, Result};

/// Midpoint cells per support diameter.
pub const SOBOLEV_CELLS: usize = 400;
/// Relative tolerance on `Q ≤ C₁`.
const C1_TOL: f64 = 1e-9;

/// Smooth compactly supported test functions with analytic gradients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TestFunction {
    /// `(1 - |x-c|²/ρ²)₊^k`.
    Bump { center: Vec2, radius: f64, power: f64 },
    /// `ψ(|x|)` with `ψ = 1` on `[0, r-ε]`, a smoothstep down to 0 on `[r-ε, r]`.
    RadialRamp { radius: f64, width: f64 },
}

impl TestFunction {
    pub fn support_center(&self) -> Vec2 {
        match *self {
            TestFunction::Bump { center, .. } => center,
            TestFunction::RadialRamp { .. } => Vec2::ZERO,
        }
    }

    pub fn support_radius(&self) -> f64 {
        match *self {
            TestFunction::Bump { radius, .. } => radius,
            TestFunction::RadialRamp { radius, .. } => radius,
        }
    }

    /// `u(·/t)`.
    pub fn dilated(&self, t: f64) -> Self {
        match *self {
            TestFunction::Bump { center, radius, power } => {
                TestFunction::Bump { center: center * t, radius: radius * t, power }
            }
            TestFunction::RadialRamp { radius, width } => TestFunction::RadialRamp { radius: radius * t, width: width * t },
        }
    }

    pub fn value_and_gradient(&self, x: Vec2) -> (f64, Vec2) {
        match *self {
            TestFunction::Bump { center, radius, power } => {
                let d = x - center;
                let s = 1.0 - d.norm_sq() / (radius * radius);
                if s <= 0.0 {
                    return (0.0, Vec2::ZERO);
                }
                let v = s.powf(power);
                let dv = -2.0 * power * s.powf(power - 1.0) / (radius * radius);
                (v, d * dv)
            }
            TestFunction::RadialRamp { radius, width } => {
                let r = x.norm();
                let t = (radius - r) / width;
                if t >= 1.0 {
                    (1.0, Vec2::ZERO)
                } else if t <= 0.0 {
                    (0.0, Vec2::ZERO)
                } else {
                    let v = t * t * (3.0 - 2.0 * t);
                    let dv = -6.0 * t * (1.0 - t) / width;
                    (v, x * (dv / r))
                }
            }
        }
    }
}

/// `count` bumps centered in `Σ ∩ B_R` whose supports may cross `∂Σ`.
pub fn seeded_bumps(cone: &ConvexCone, r: f64, count: usize, seed: u64) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c = Vec2::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
        if c.norm() >= r || !cone.contains(c) {
            continue;
        }
        let radius = rng.gen_range(0.2..1.0) * r;
        let power = rng.gen_range(2.0..4.0);
        out.push(TestFunction::Bump { center: c, radius, power });
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SobolevReport {
    pub p: f64,
    pub p_star: f64,
    #[serde(rename = "D")]
    pub dimension: f64,
    /// `(D w(W∩Σ)^{1/D})⁻¹` when `p = 1`.
    pub c1: Option<f64>,
    pub quotients: Vec<f64>,
    pub max_quotient: f64,
    pub violations: usize,
    pub seed: u64,
}

impl SobolevReport {
    pub fn pass(&self) -> bool {
        self.violations == 0 && self.quotients.iter().all(|q| q.is_finite())
    }

    /// For `p = 1` the link `max Q ≤ C₁`; otherwise only finiteness.
    pub fn certificate(&self) -> Certificate {
        let mut c = Certificate::new("weighted sobolev");
        let infinite = self.quotients.iter().filter(|q| !q.is_finite()).count();
        c.push("finite_quotients", infinite as f64, 0.0, 0.0);
        if let Some(c1) = self.c1 {
            c.push("isoperimetric_constant", self.max_quotient, c1, C1_TOL * c1);
        }
        c.meta("p", self.p);
        c.meta("D", self.dimension);
        c.meta("functions", self.quotients.len());
        c.meta("seed", self.seed);
        c
    }
}

/// `Q(u) = ‖u‖_{L^{p*}(w)} / ‖∇u‖_{L^p(w)}` by the midpoint rule on
/// [`SOBOLEV_CELLS`]² cells over the support box of `u`, restricted to `Σ`.
pub fn sobolev_quotient(u: &TestFunction, w: &HomogeneousWeight, cone: &ConvexCone, p: f64) -> Result<f64> {
    let d = 2.0 + w.degree();
    if !(p >= 1.0 && p < d) {
        return Err(Error::Exponent(format!("need 1 <= p < D = {d}, got {p}")));
    }
    let p_star = p * d / (d - p);
    let (c, rho) = (u.support_center(), u.support_radius());
    let n = SOBOLEV_CELLS;
    let cell = 2.0 * rho / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            let x = c + Vec2::new(-rho + (i as f64 + 0.5) * cell, -rho + (j as f64 + 0.5) * cell);
            if !cone.contains(x) {
                continue;
            }
            let (v, g) = u.value_and_gradient(x);
            if v == 0.0 && g == Vec2::ZERO {
                continue;
            }
            let wx = w.value(x);
            num += v.abs().powf(p_star) * wx;
            den += g.norm().powf(p) * wx;
        }
    }
    let area = cell * cell;
    Ok((num * area).powf(1.0 / p_star) / (den * area).powf(1.0 / p))
}

/// Weighted Sobolev quotients over `family`; for `p = 1` each is compared
/// with the isoperimetric constant `C₁`.
pub fn sobolev_check(
    w: &HomogeneousWeight,
    cone: &ConvexCone,
    p: f64,
    family: &[TestFunction],
    seed: u64,
) -> Result<SobolevReport> {
    let d = 2.0 + w.degree();
    if !(p >= 1.0 && p < d) {
        return Err(Error::Exponent(format!("need 1 <= p < D = {d}, got {p}")));
    }
    let w = w.clone().with_cone(*cone);
    let c1 = if p == 1.0 {
        let (_, m) = wulff_reference(&Gauge::euclidean(), &w, cone)?;
        Some(1.0 / (d * m.powf(1.0 / d)))
    } else {
        None
    };
    let quotients = family.iter().map(|u| sobolev_quotient(u, &w, cone, p)).collect::<Result<Vec<_>>>()?;
    let violations = match c1 {
        Some(c) => quotients.iter().filter(|&&q| q > c * (1.0 + C1_TOL)).count(),
        None => 0,
    };
    Ok(SobolevReport {
        p,
        p_star: p * d / (d - p),
        dimension: d,
        c1,
        max_quotient: quotients.iter().copied().fold(0.0, f64::max),
        quotients,
        violations,
        seed,
    })
}
