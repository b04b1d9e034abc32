use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{Polygon, Sym2, TriMesh, Vec2};
use crate::pde::ScalarField;
use crate::weights::HomogeneousWeight;

/// Tolerance of the plain AM-GM check on analytic fields.
pub const AMGM_TOL: f64 = 1e-9;
/// Relative tolerance of the weighted AM-GM check.
pub const WEIGHTED_AMGM_TOL: f64 = 1e-2;
/// Minimum graph distance from the free boundary of an interior argmin.
pub const INTERIOR_HOPS: usize = 2;

/// Discrete lower contact set `Γ_u`.
#[derive(Debug, Clone, Serialize)]
pub struct ContactSet {
    pub members: Vec<usize>,
    pub gradients: Vec<Vec2>,
    pub hessians: Vec<Sym2>,
    /// Lumped area of each member.
    pub areas: Vec<f64>,
    /// Minorization allowance used by the scan.
    pub epsilon: f64,
    /// Area of the whole mesh.
    pub domain_area: f64,
}

impl ContactSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// `|Γ_u| / |Ω|` in lumped measure.
    pub fn area_fraction(&self) -> f64 {
        self.area() / self.domain_area
    }

    /// The members whose entry of `hops` is at least `min_hops`.
    pub fn restricted(&self, hops: &[usize], min_hops: usize) -> ContactSet {
        let keep: Vec<usize> = (0..self.len()).filter(|&k| hops[self.members[k]] >= min_hops).collect();
        ContactSet {
            members: keep.iter().map(|&k| self.members[k]).collect(),
            gradients: keep.iter().map(|&k| self.gradients[k]).collect(),
            hessians: keep.iter().map(|&k| self.hessians[k]).collect(),
            areas: keep.iter().map(|&k| self.areas[k]).collect(),
            epsilon: self.epsilon,
            domain_area: self.domain_area,
        }
    }

    /// Smallest Hessian eigenvalue over the members.
    pub fn min_hessian_eigenvalue(&self) -> f64 {
        self.hessians.iter().map(|h| h.eigenvalues().0).fold(f64::INFINITY, f64::min)
    }
}

/// Default allowance `4 h² max|D²u|`.
pub fn default_contact_epsilon(u: &ScalarField) -> f64 {
    let h = u.mesh().h();
    4.0 * h * h * u.max_abs_hessian()
}

/// Vertices whose recovered tangent plane lies below every nodal value of
/// `u` up to `epsilon` (default [`default_contact_epsilon`]).
pub fn lower_contact_set(u: &ScalarField, epsilon: Option<f64>) -> ContactSet {
    let eps = epsilon.unwrap_or_else(|| default_contact_epsilon(u));
    let mesh = u.mesh();
    let pts = mesh.vertices();
    let vals = u.values();
    let members: Vec<usize> = (0..pts.len())
        .into_par_iter()
        .filter(|&i| {
            let (x, ui, p) = (pts[i], vals[i], u.gradient(i));
            pts.iter().zip(vals).all(|(&y, &uy)| uy - ui - p.dot(y - x) >= -eps)
        })
        .collect();
    let lumped = mesh.lumped_areas();
    ContactSet {
        gradients: members.iter().map(|&i| u.gradient(i)).collect(),
        hessians: members.iter().map(|&i| u.hessian(i)).collect(),
        areas: members.iter().map(|&i| lumped[i]).collect(),
        members,
        epsilon: eps,
        domain_area: lumped.iter().sum(),
    }
}

/// Index minimizing `values[k] - p·points[k]`; ties go to the lowest index.
pub fn tilted_argmin(points: &[Vec2], values: &[f64], p: Vec2) -> usize {
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for (k, (&y, &v)) in points.iter().zip(values).enumerate() {
        let t = v - p.dot(y);
        if t < best_val {
            best_val = t;
            best = k;
        }
    }
    best
}

/// Vertex minimizing `u(y) - p·y`.
pub fn legendre_argmin(u: &ScalarField, p: Vec2) -> usize {
    tilted_argmin(u.mesh().vertices(), u.values(), p)
}

/// Graph distance to the nearest vertex of a boundary edge that is not on
/// the cone boundary.
pub fn free_boundary_hops(mesh: &TriMesh) -> Vec<usize> {
    let mut hops = vec![usize::MAX; mesh.num_vertices()];
    let mut queue = VecDeque::new();
    for e in mesh.boundary_edges().iter().filter(|e| !e.on_cone_boundary) {
        for v in [e.a, e.b] {
            if hops[v] == usize::MAX {
                hops[v] = 0;
                queue.push_back(v);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for &n in mesh.neighbors(v) {
            if hops[n] == usize::MAX {
                hops[n] = hops[v] + 1;
                queue.push_back(n);
            }
        }
    }
    hops
}

/// Uniform samples of `poly` by rejection in its bounding box.
pub fn sample_polygon(poly: &Polygon, k: usize, seed: u64) -> Vec<Vec2> {
    let (lo, hi) = poly.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let p = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if poly.contains(p) {
            out.push(p);
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageFailure {
    pub p: Vec2,
    pub vertex: usize,
    pub hops: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub samples: usize,
    pub interior: usize,
    pub fraction: f64,
    pub delta: f64,
    pub seed: u64,
    pub failures: Vec<CoverageFailure>,
}

impl CoverageReport {
    pub fn complete(&self) -> bool {
        self.interior == self.samples
    }
}

/// Samples `p` uniformly in `(1-δ)·target` and checks that the Legendre
/// argmin of each is at least [`INTERIOR_HOPS`] from the free boundary.
pub fn gradient_coverage(u: &ScalarField, target: &Polygon, delta: f64, k: usize, seed: u64) -> CoverageReport {
    let scaled = target.scaled(1.0 - delta).unwrap_or_else(|_| target.clone());
    let ps = sample_polygon(&scaled, k, seed);
    let hops = free_boundary_hops(u.mesh());
    let argmins: Vec<usize> = ps.par_iter().map(|&p| legendre_argmin(u, p)).collect();
    let failures: Vec<CoverageFailure> = ps
        .iter()
        .zip(&argmins)
        .filter(|(_, &v)| hops[v] < INTERIOR_HOPS)
        .map(|(&p, &v)| CoverageFailure { p, vertex: v, hops: hops[v] })
        .collect();
    let interior = k - failures.len();
    CoverageReport {
        samples: k,
        interior,
        fraction: if k == 0 { 1.0 } else { interior as f64 / k as f64 },
        delta,
        seed,
        failures,
    }
}

/// Integrand of [`contact_integral`].
pub enum Integrand<'a> {
    /// `det D²u`.
    Det,
    /// `w(∇u) det D²u`, summed only where `∇u ∈ Σ`.
    WeightedDet(&'a HomogeneousWeight),
    /// `g(|∇u|) det D²u`.
    Radial(&'a dyn Fn(f64) -> f64),
}

/// Gradients within this distance of `Σ` count as inside.
const CONE_FILTER_TOL: f64 = 1e-12;

/// `Σ_Γ integrand(x_i) · area_i` with negative determinants clamped to zero.
pub fn contact_integral(gamma: &ContactSet, integrand: &Integrand) -> f64 {
    let mut sum = 0.0;
    for k in 0..gamma.len() {
        let det = gamma.hessians[k].det().max(0.0);
        let p = gamma.gradients[k];
        let factor = match integrand {
            Integrand::Det => 1.0,
            Integrand::WeightedDet(w) => {
                if !w.cone().contains_closed(p, CONE_FILTER_TOL) {
                    continue;
                }
                w.value(p)
            }
            Integrand::Radial(g) => g(p.norm()),
        };
        sum += factor * det * gamma.areas[k];
    }
    sum
}

/// Weighted data of the AM-GM step.
#[derive(Clone, Copy)]
pub struct WeightedContext<'a> {
    pub weight: &'a HomogeneousWeight,
    pub b_omega: f64,
    /// `D = 2 + α`.
    pub dimension: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmgmReport {
    pub checked: usize,
    /// Members dropped by the cone filter or a vanishing weight.
    pub skipped: usize,
    /// Plain: `max det − (Δu/2)²`. Weighted: `max (lhs − rhs)/rhs`.
    pub max_slack: f64,
    pub witness: Option<usize>,
    pub weighted: bool,
}

impl AmgmReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_slack <= tol
    }
}

/// Pointwise AM-GM bound on the contact set: `det D²u ≤ (Δu/2)²`, or in the
/// weighted case `w(∇u)/w(x) · (Δu/2)² ≤ (b_Ω/D)^D`.
pub fn amgm_check(u: &ScalarField, gamma: &ContactSet, weighted: Option<WeightedContext>) -> AmgmReport {
    let pts = u.mesh().vertices();
    let mut max_slack = f64::NEG_INFINITY;
    let mut witness = None;
    let mut checked = 0;
    for k in 0..gamma.len() {
        let hess = gamma.hessians[k];
        let half_lap = hess.trace().max(0.0) / 2.0;
        let slack = match weighted {
            None => hess.det() - half_lap * half_lap,
            Some(ctx) => {
                let p = gamma.gradients[k];
                let wx = ctx.weight.value(pts[gamma.members[k]]);
                if !ctx.weight.cone().contains_closed(p, CONE_FILTER_TOL) || wx <= 0.0 {
                    continue;
                }
                let rhs = (ctx.b_omega / ctx.dimension).powf(ctx.dimension);
                (ctx.weight.value(p) / wx * half_lap * half_lap - rhs) / rhs
            }
        };
        checked += 1;
        if slack > max_slack {
            max_slack = slack;
            witness = Some(gamma.members[k]);
        }
    }
    AmgmReport {
        checked,
        skipped: gamma.len() - checked,
        max_slack: if checked == 0 { 0.0 } else { max_slack },
        witness,
        weighted: weighted.is_some(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    /// `a = b_Ω / 2`.
    pub a: f64,
    /// Area-weighted mean of `‖D²u − a I‖_F / a` over `Γ_u`.
    pub mean_deviation: f64,
    pub max_deviation: f64,
    pub members: usize,
}

/// Distance of the recovered Hessians on `Γ_u` from `a I`.
pub fn rigidity_check(gamma: &ContactSet, b_omega: f64) -> RigidityReport {
    let a = b_omega / 2.0;
    let target = Sym2::identity().scaled(a);
    let mut num = 0.0;
    let mut max: f64 = 0.0;
    for (h, &area) in gamma.hessians.iter().zip(&gamma.areas) {
        let d = h.sub(target).frobenius() / a;
        num += d * area;
        max = max.max(d);
    }
    let area = gamma.area();
    RigidityReport {
        a,
        mean_deviation: if area > 0.0 { num / area } else { 0.0 },
        max_deviation: max,
        members: gamma.len(),
    }
}
