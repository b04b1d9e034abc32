use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sparse::{bicgstab, CsrMatrix};
use super::SolverConfig;
use crate::geometry::{Polygon, Sym2, Vec2};
use crate::{Error, Result};

/// Uniform grid over the bounding box of a polygon.
///
/// Unknown (masked) nodes lie strictly inside the polygon and have all four
/// axis neighbors in the closed polygon. Every other node carries `u = 0`.
#[derive(Debug, Clone)]
pub struct GridDomain {
    polygon: Polygon,
    origin: Vec2,
    h: f64,
    nx: usize,
    ny: usize,
    closed: Vec<bool>,
    mask: Vec<bool>,
    unknown_of: Vec<usize>,
    unknowns: Vec<usize>,
}

impl GridDomain {
    pub fn new(polygon: &Polygon, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Parameter(format!("grid spacing must be positive, got {h}")));
        }
        let (lo, hi) = polygon.bounding_box();
        let nx = ((hi.x - lo.x) / h + 1e-9).floor() as usize + 1;
        let ny = ((hi.y - lo.y) / h + 1e-9).floor() as usize + 1;
        let tol = 1e-9 * h;
        let mut closed = vec![false; nx * ny];
        let mut strict = vec![false; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let p = lo + Vec2::new(i as f64 * h, j as f64 * h);
                let inside = polygon.contains(p);
                let d = polygon.distance_to_boundary(p);
                closed[j * nx + i] = inside || d <= tol;
                strict[j * nx + i] = inside && d > tol;
            }
        }
        let mut mask = vec![false; nx * ny];
        let mut unknown_of = vec![usize::MAX; nx * ny];
        let mut unknowns = Vec::new();
        for j in 1..ny.saturating_sub(1) {
            for i in 1..nx.saturating_sub(1) {
                let k = j * nx + i;
                if strict[k] && closed[k - 1] && closed[k + 1] && closed[k - nx] && closed[k + nx] {
                    mask[k] = true;
                    unknown_of[k] = unknowns.len();
                    unknowns.push(k);
                }
            }
        }
        if unknowns.is_empty() {
            return Err(Error::Parameter("grid has no interior nodes; decrease h".into()));
        }
        Ok(GridDomain { polygon: polygon.clone(), origin: lo, h, nx, ny, closed, mask, unknown_of, unknowns })
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn num_nodes(&self) -> usize {
        self.nx * self.ny
    }

    pub fn point(&self, k: usize) -> Vec2 {
        let (i, j) = (k % self.nx, k / self.nx);
        self.origin + Vec2::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn is_masked(&self, k: usize) -> bool {
        self.mask[k]
    }

    /// Node lies in the closed polygon.
    pub fn is_in_closure(&self, k: usize) -> bool {
        self.closed[k]
    }

    /// Node ids of the unknowns, in solve order.
    pub fn unknowns(&self) -> &[usize] {
        &self.unknowns
    }

    fn neighbor(&self, k: usize, di: isize, dj: isize) -> Option<usize> {
        let i = (k % self.nx) as isize + di;
        let j = (k / self.nx) as isize + dj;
        if i < 0 || j < 0 || i >= self.nx as isize || j >= self.ny as isize {
            None
        } else {
            Some(j as usize * self.nx + i as usize)
        }
    }
}

/// Nodal values on a [`GridDomain`]; zero off the mask.
#[derive(Debug, Clone)]
pub struct GridField {
    pub domain: Arc<GridDomain>,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn from_unknowns(domain: Arc<GridDomain>, x: &[f64]) -> Self {
        let mut values = vec![0.0; domain.num_nodes()];
        for (u, &k) in domain.unknowns().iter().enumerate() {
            values[k] = x[u];
        }
        GridField { domain, values }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Value at the node nearest to `p`.
    pub fn nearest_value(&self, p: Vec2) -> f64 {
        let d = &self.domain;
        let i = ((p.x - d.origin.x) / d.h).round().clamp(0.0, (d.nx - 1) as f64) as usize;
        let j = ((p.y - d.origin.y) / d.h).round().clamp(0.0, (d.ny - 1) as f64) as usize;
        self.values[j * d.nx + i]
    }
}

type MatrixField = Arc<dyn Fn(Vec2) -> Sym2 + Send + Sync>;
type VectorField = Arc<dyn Fn(Vec2) -> Vec2 + Send + Sync>;

/// Coefficients of `L₀u = a_ij ∂_ij u + b_i ∂_i u` with declared ellipticity
/// bounds `c0 |ξ|² <= a ξ·ξ <= c1 |ξ|²`.
#[derive(Clone)]
pub struct OperatorCoeffs {
    a: MatrixField,
    b: VectorField,
    pub c0: f64,
    pub c1: f64,
    has_drift: bool,
}

impl std::fmt::Debug for OperatorCoeffs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OperatorCoeffs {{ c0: {}, c1: {}, drift: {} }}", self.c0, self.c1, self.has_drift)
    }
}

impl OperatorCoeffs {
    pub fn laplacian() -> Self {
        OperatorCoeffs::constant(Sym2::identity(), Vec2::ZERO)
    }

    pub fn constant(a: Sym2, b: Vec2) -> Self {
        let (l0, l1) = a.eigenvalues();
        OperatorCoeffs {
            a: Arc::new(move |_| a),
            b: Arc::new(move |_| b),
            c0: l0.min(l1),
            c1: l0.max(l1),
            has_drift: b != Vec2::ZERO,
        }
    }

    pub fn new(
        a: impl Fn(Vec2) -> Sym2 + Send + Sync + 'static,
        b: impl Fn(Vec2) -> Vec2 + Send + Sync + 'static,
        c0: f64,
        c1: f64,
    ) -> Self {
        OperatorCoeffs { a: Arc::new(a), b: Arc::new(b), c0, c1, has_drift: true }
    }

    /// Piecewise-constant coefficients alternating between `a0` and `a1` on
    /// square cells of side `cell`.
    pub fn checkerboard(a0: Sym2, a1: Sym2, cell: f64) -> Self {
        let (e00, e01) = a0.eigenvalues();
        let (e10, e11) = a1.eigenvalues();
        OperatorCoeffs {
            a: Arc::new(move |p: Vec2| {
                let parity = ((p.x / cell).floor() as i64 + (p.y / cell).floor() as i64).rem_euclid(2);
                if parity == 0 {
                    a0
                } else {
                    a1
                }
            }),
            b: Arc::new(|_| Vec2::ZERO),
            c0: e00.min(e01).min(e10).min(e11),
            c1: e00.max(e01).max(e10).max(e11),
            has_drift: false,
        }
    }

    pub fn a(&self, p: Vec2) -> Sym2 {
        (self.a)(p)
    }

    pub fn b(&self, p: Vec2) -> Vec2 {
        (self.b)(p)
    }
}

/// Checks the declared ellipticity bounds on every grid node against
/// `samples` random unit directions each.
pub fn ellipticity_check(coeffs: &OperatorCoeffs, domain: &GridDomain, samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = 1e-12 * coeffs.c1.abs().max(1.0);
    domain.unknowns().iter().all(|&k| {
        let a = coeffs.a(domain.point(k));
        (0..samples).all(|_| {
            let xi = Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
            let q = a.quad(xi);
            q >= coeffs.c0 - tol && q <= coeffs.c1 + tol
        })
    })
}

/// Matrix of `-L_h` on the unknowns.
///
/// Second derivatives use central differences; the mixed derivative uses the
/// diagonal pair aligned with the sign of `a12`, which keeps the stencil
/// monotone when `|a12| <= min(a11, a22)`. Drift terms are upwinded.
pub(crate) fn assemble_operator(domain: &GridDomain, coeffs: &OperatorCoeffs) -> Result<CsrMatrix> {
    let h = domain.h;
    let h2 = h * h;
    let mut trip = Vec::with_capacity(9 * domain.unknowns.len());
    for (row, &k) in domain.unknowns.iter().enumerate() {
        let p = domain.point(k);
        let a = coeffs.a(p);
        let b = coeffs.b(p);
        let s = a.xy.abs();
        if s > a.xx.min(a.yy) * (1.0 + 1e-12) {
            return Err(Error::Stability(format!(
                "|a12| = {s:.4} exceeds min(a11, a22) = {:.4} at ({:.4}, {:.4}); the stencil loses monotonicity",
                a.xx.min(a.yy),
                p.x,
                p.y
            )));
        }
        let mut entries: Vec<(isize, isize, f64)> = vec![
            (0, 0, (-2.0 * a.xx - 2.0 * a.yy + 2.0 * s) / h2),
            (1, 0, (a.xx - s) / h2),
            (-1, 0, (a.xx - s) / h2),
            (0, 1, (a.yy - s) / h2),
            (0, -1, (a.yy - s) / h2),
        ];
        if s > 0.0 {
            if a.xy > 0.0 {
                entries.push((1, 1, s / h2));
                entries.push((-1, -1, s / h2));
            } else {
                entries.push((1, -1, s / h2));
                entries.push((-1, 1, s / h2));
            }
        }
        if b.x > 0.0 {
            entries.push((1, 0, b.x / h));
            entries.push((0, 0, -b.x / h));
        } else if b.x < 0.0 {
            entries.push((-1, 0, -b.x / h));
            entries.push((0, 0, b.x / h));
        }
        if b.y > 0.0 {
            entries.push((0, 1, b.y / h));
            entries.push((0, 0, -b.y / h));
        } else if b.y < 0.0 {
            entries.push((0, -1, -b.y / h));
            entries.push((0, 0, b.y / h));
        }
        for (di, dj, v) in entries {
            if v == 0.0 {
                continue;
            }
            if let Some(nb) = domain.neighbor(k, di, dj) {
                let col = domain.unknown_of[nb];
                if col != usize::MAX {
                    trip.push((row, col, -v));
                }
            }
        }
    }
    Ok(CsrMatrix::from_triplets(domain.unknowns.len(), trip))
}

/// Finite-difference solution of `L₀u = f` with `u = 0` off the mask.
pub fn solve_dirichlet_fd(
    domain: Arc<GridDomain>,
    coeffs: &OperatorCoeffs,
    f: &dyn Fn(Vec2) -> f64,
    cfg: &SolverConfig,
) -> Result<GridField> {
    let a = assemble_operator(&domain, coeffs)?;
    let rhs: Vec<f64> = domain.unknowns.iter().map(|&k| -f(domain.point(k))).collect();
    let mut x = vec![0.0; rhs.len()];
    bicgstab(&a, &rhs, &mut x, cfg.tol, cfg.max_iter)?;
    Ok(GridField::from_unknowns(domain, &x))
}
