use std::sync::Arc;

use serde::Serialize;

use super::field::ScalarField;
use super::sparse::{cg, CsrMatrix, SolveStats};
use super::SolverConfig;
use crate::geometry::quadrature::{gl5, TRI6};
use crate::geometry::{Gauge, TriMesh, Vec2};
use crate::weights::HomogeneousWeight;
use crate::{Error, Result};

type FluxFn = Arc<dyn Fn(Vec2, Vec2) -> f64 + Send + Sync>;

/// Prescribed normal flux `∂u/∂ν = g` on the mesh boundary.
#[derive(Clone)]
pub enum Flux {
    /// `g ≡ 1`.
    Unit,
    /// `g = H(ν)`.
    Gauge(Gauge),
    /// `g(x, ν)`.
    Function(FluxFn),
}

impl Flux {
    fn eval(&self, x: Vec2, normal: Vec2) -> f64 {
        match self {
            Flux::Unit => 1.0,
            Flux::Gauge(h) => h.eval(normal),
            Flux::Function(f) => f(x, normal),
        }
    }
}

/// Output of [`solve_neumann`].
#[derive(Debug, Clone)]
pub struct NeumannSolution {
    pub field: ScalarField,
    /// Compatibility constant `b_Ω = ∮ w g / ∫ w`.
    pub b_omega: f64,
    /// `∮ w g dS` as assembled.
    pub boundary_load: f64,
    /// `∫ w dx` as assembled.
    pub measure: f64,
    /// `|1ᵀf| / Σ|f_i|` of the assembled right-hand side.
    pub compatibility_defect: f64,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NeumannSummary {
    pub b_omega: f64,
    pub boundary_load: f64,
    pub measure: f64,
    pub compatibility_defect: f64,
    pub iterations: usize,
    pub relative_residual: f64,
}

impl NeumannSolution {
    pub fn summary(&self) -> NeumannSummary {
        NeumannSummary {
            b_omega: self.b_omega,
            boundary_load: self.boundary_load,
            measure: self.measure,
            compatibility_defect: self.compatibility_defect,
            iterations: self.stats.iterations,
            relative_residual: self.stats.relative_residual,
        }
    }
}

fn triangle_basis_gradients(p: [Vec2; 3]) -> [Vec2; 3] {
    let twice_area = (p[1] - p[0]).cross(p[2] - p[0]);
    // grad phi_k = perp(opposite edge) / (2 |T|), pointing toward vertex k
    let g = |a: Vec2, b: Vec2| {
        let e = b - a;
        Vec2::new(-e.y, e.x) / twice_area
    };
    [g(p[1], p[2]), g(p[2], p[0]), g(p[0], p[1])]
}

/// P1 Galerkin solution of `div(w ∇u) = b_Ω w` in `Ω`, `∂u/∂ν = g` on `∂Ω`.
///
/// The weak form is `∫ w ∇u·∇v = ∮ w g v − b_Ω ∫ w v` with `b_Ω` chosen so
/// that the right-hand side is orthogonal to constants. The singular system
/// is solved by conjugate gradients and the solution normalized to mean zero.
pub fn solve_neumann(
    mesh: Arc<TriMesh>,
    w: &HomogeneousWeight,
    flux: &Flux,
    cfg: &SolverConfig,
) -> Result<NeumannSolution> {
    let n = mesh.num_vertices();
    if let Some(p) = mesh.vertices().iter().find(|&&p| !(w.value(p) > 0.0)) {
        return Err(Error::Weight(format!(
            "weight is not positive at ({:.6}, {:.6}); shrink the domain into the cone",
            p.x, p.y
        )));
    }
    let mut trip = Vec::with_capacity(9 * mesh.triangles().len());
    let mut mass = vec![0.0; n];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let p = mesh.triangle_points(t);
        let area = mesh.triangle_area(t);
        let grads = triangle_basis_gradients(p);
        let mut w_int = 0.0;
        for (l, qw) in TRI6 {
            let x = p[0] * l[0] + p[1] * l[1] + p[2] * l[2];
            let wx = qw * area * w.value(x);
            w_int += wx;
            for k in 0..3 {
                mass[tri[k]] += wx * l[k];
            }
        }
        for a in 0..3 {
            for b in 0..3 {
                trip.push((tri[a], tri[b], w_int * grads[a].dot(grads[b])));
            }
        }
    }
    let k = CsrMatrix::from_triplets(n, trip);

    let mut bload = vec![0.0; n];
    let (gx, gw) = gl5();
    for e in mesh.boundary_edges() {
        let (a, b) = (mesh.vertices()[e.a], mesh.vertices()[e.b]);
        let half = 0.5 * a.dist(b);
        for q in 0..5 {
            let s = 0.5 * (gx[q] + 1.0);
            let x = a + (b - a) * s;
            let val = gw[q] * half * w.value(x) * flux.eval(x, e.normal);
            bload[e.a] += val * (1.0 - s);
            bload[e.b] += val * s;
        }
    }
    let boundary_load: f64 = bload.iter().sum();
    let measure: f64 = mass.iter().sum();
    let b_omega = boundary_load / measure;
    let f: Vec<f64> = bload.iter().zip(&mass).map(|(bl, m)| bl - b_omega * m).collect();
    let abs_sum: f64 = f.iter().map(|v| v.abs()).sum();
    let compatibility_defect = f.iter().sum::<f64>().abs() / abs_sum.max(f64::MIN_POSITIVE);

    let mut u = vec![0.0; n];
    let stats = cg(&k, &f, &mut u, cfg.tol, cfg.max_iter)?;
    let lumped = mesh.lumped_areas();
    let total: f64 = lumped.iter().sum();
    let mean = lumped.iter().zip(&u).map(|(a, v)| a * v).sum::<f64>() / total;
    u.iter_mut().for_each(|v| *v -= mean);

    // residual after normalization (constants lie in the kernel)
    let ku = k.apply(&u);
    let fnorm = super::sparse::norm(&f).max(f64::MIN_POSITIVE);
    let res: Vec<f64> = ku.iter().zip(&f).map(|(a, b)| a - b).collect();
    let stats = SolveStats { iterations: stats.iterations, relative_residual: super::sparse::norm(&res) / fnorm };

    Ok(NeumannSolution {
        field: ScalarField::new(mesh, u),
        b_omega,
        boundary_load,
        measure,
        compatibility_defect,
        stats,
    })
}

/// Stiffness and consistent mass matrices of the Dirichlet Laplacian on the
/// interior vertices, and the map from interior index to vertex index.
pub fn assemble_dirichlet_laplacian(mesh: &TriMesh) -> Result<(CsrMatrix, CsrMatrix, Vec<usize>)> {
    let n = mesh.num_vertices();
    let mut dof = vec![usize::MAX; n];
    let mut interior = Vec::new();
    for i in 0..n {
        if !mesh.is_boundary_vertex(i) {
            dof[i] = interior.len();
            interior.push(i);
        }
    }
    if interior.is_empty() {
        return Err(Error::Discretization("mesh has no interior vertices".into()));
    }
    let mut kt = Vec::new();
    let mut mt = Vec::new();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let p = mesh.triangle_points(t);
        let area = mesh.triangle_area(t);
        let grads = triangle_basis_gradients(p);
        for a in 0..3 {
            let da = dof[tri[a]];
            if da == usize::MAX {
                continue;
            }
            for b in 0..3 {
                let db = dof[tri[b]];
                if db == usize::MAX {
                    continue;
                }
                kt.push((da, db, area * grads[a].dot(grads[b])));
                mt.push((da, db, area / 12.0 * if a == b { 2.0 } else { 1.0 }));
            }
        }
    }
    let m = interior.len();
    Ok((CsrMatrix::from_triplets(m, kt), CsrMatrix::from_triplets(m, mt), interior))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{triangulate, Polygon};

    #[test]
    fn unit_square_compatibility_constant() {
        let mesh = Arc::new(triangulate(&Polygon::unit_square(), 0.1).unwrap());
        let s = solve_neumann(mesh, &HomogeneousWeight::constant(), &Flux::Unit, &SolverConfig::default()).unwrap();
        assert!((s.b_omega - 4.0).abs() < 1e-12);
        assert!(s.compatibility_defect < 1e-10);
        assert!(s.field.mean().abs() < 1e-12);
    }

    #[test]
    fn nonpositive_weight_is_rejected() {
        let mesh = Arc::new(triangulate(&Polygon::unit_square(), 0.25).unwrap());
        let w = HomogeneousWeight::monomial(1.0, 1.0).unwrap();
        let r = solve_neumann(mesh, &w, &Flux::Unit, &SolverConfig::default());
        assert!(matches!(r, Err(Error::Weight(_))));
    }

    #[test]
    fn stiffness_annihilates_constants_and_mass_sums_to_area() {
        let mesh = triangulate(&Polygon::regular_ngon(32, 1.0).unwrap(), 0.1).unwrap();
        let (k, m, interior) = assemble_dirichlet_laplacian(&mesh).unwrap();
        assert_eq!(k.dim(), interior.len());
        let ones = vec![1.0; m.dim()];
        let mass: f64 = m.apply(&ones).iter().sum();
        assert!(mass > 0.0 && mass < mesh.total_area());
    }
}
