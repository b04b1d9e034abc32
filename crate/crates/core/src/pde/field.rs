use std::collections::VecDeque;
use std::sync::Arc;

use crate::geometry::{Sym2, TriMesh, Vec2};

/// Ring count of the default Hessian-recovery patch.
pub const DEFAULT_RECOVERY_RINGS: usize = 2;

/// Nodal values of a P1 function on a [`TriMesh`] together with its exact
/// per-triangle gradients and recovered per-vertex gradients and Hessians.
#[derive(Debug, Clone)]
pub struct ScalarField {
    mesh: Arc<TriMesh>,
    values: Vec<f64>,
    tri_gradients: Vec<Vec2>,
    recovery: HessianRecovery,
}

/// Output of [`hessian_recover`].
#[derive(Debug, Clone)]
pub struct HessianRecovery {
    pub gradients: Vec<Vec2>,
    pub hessians: Vec<Sym2>,
    /// Vertices whose patch was too small and whose data was copied from the
    /// nearest vertex with a regular patch.
    pub fallback: Vec<bool>,
}

impl ScalarField {
    pub fn new(mesh: Arc<TriMesh>, values: Vec<f64>) -> Self {
        ScalarField::with_rings(mesh, values, DEFAULT_RECOVERY_RINGS)
    }

    /// As [`ScalarField::new`] with an explicit recovery patch size.
    pub fn with_rings(mesh: Arc<TriMesh>, values: Vec<f64>, rings: usize) -> Self {
        assert_eq!(values.len(), mesh.num_vertices(), "one value per mesh vertex");
        let tri_gradients = (0..mesh.triangles().len()).map(|t| p1_gradient(&mesh, &values, t)).collect();
        let recovery = recover(&mesh, &values, rings);
        ScalarField { mesh, values, tri_gradients, recovery }
    }

    /// Interpolates `f` at the mesh vertices.
    pub fn from_fn(mesh: Arc<TriMesh>, f: impl Fn(Vec2) -> f64) -> Self {
        let values = mesh.vertices().iter().map(|&p| f(p)).collect();
        ScalarField::new(mesh, values)
    }

    pub fn mesh(&self) -> &Arc<TriMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Exact gradient of the linear interpolant on triangle `t`.
    pub fn tri_gradient(&self, t: usize) -> Vec2 {
        self.tri_gradients[t]
    }

    pub fn tri_gradients(&self) -> &[Vec2] {
        &self.tri_gradients
    }

    /// Recovered gradient at vertex `i`.
    pub fn gradient(&self, i: usize) -> Vec2 {
        self.recovery.gradients[i]
    }

    /// Recovered Hessian at vertex `i`.
    pub fn hessian(&self, i: usize) -> Sym2 {
        self.recovery.hessians[i]
    }

    pub fn recovery(&self) -> &HessianRecovery {
        &self.recovery
    }

    pub fn is_fallback(&self, i: usize) -> bool {
        self.recovery.fallback[i]
    }

    /// Mean value `(1/|Ω|) ∫ u` of the P1 function.
    pub fn mean(&self) -> f64 {
        let lumped = self.mesh.lumped_areas();
        let total: f64 = lumped.iter().sum();
        lumped.iter().zip(&self.values).map(|(a, u)| a * u).sum::<f64>() / total
    }

    pub fn max_abs_hessian(&self) -> f64 {
        self.recovery.hessians.iter().map(|h| h.max_abs()).fold(0.0, f64::max)
    }

    /// The same field restricted to a submesh, given the map new -> old index.
    pub fn restrict(&self, mesh: Arc<TriMesh>, new_to_old: &[usize]) -> ScalarField {
        let values = new_to_old.iter().map(|&i| self.values[i]).collect();
        ScalarField::new(mesh, values)
    }
}

fn p1_gradient(mesh: &TriMesh, u: &[f64], t: usize) -> Vec2 {
    let [a, b, c] = mesh.triangles()[t];
    let p = mesh.triangle_points(t);
    let (e1, e2) = (p[1] - p[0], p[2] - p[0]);
    let (d1, d2) = (u[b] - u[a], u[c] - u[a]);
    let det = e1.cross(e2);
    Vec2::new((d1 * e2.y - d2 * e1.y) / det, (e1.x * d2 - e2.x * d1) / det)
}

/// Per-vertex gradients and Hessians of the nodal field `u`.
///
/// On each vertex patch a linear gradient field `g(x) = g0 + G (x - x_v)`
/// with `G` symmetric is fitted in least squares to the edge increments
/// `u_j - u_i = g(m_ij) . (x_j - x_i)`, where `m_ij` is the edge midpoint.
/// The fit reproduces quadratics exactly. Vertices with fewer than three
/// incident triangles copy the data of the nearest regular vertex.
pub fn hessian_recover(mesh: &TriMesh, u: &[f64], rings: usize) -> HessianRecovery {
    recover(mesh, u, rings)
}

fn recover(mesh: &TriMesh, u: &[f64], rings: usize) -> HessianRecovery {
    let n = mesh.num_vertices();
    let mut gradients = vec![Vec2::ZERO; n];
    let mut hessians = vec![Sym2::ZERO; n];
    let mut fallback = vec![false; n];
    let verts = mesh.vertices();
    for v in 0..n {
        if mesh.vertex_triangles(v).len() < 3 {
            fallback[v] = true;
            continue;
        }
        match fit_patch(mesh, u, v, rings.max(1)) {
            Some((g, h)) => {
                gradients[v] = g;
                hessians[v] = h;
            }
            None => fallback[v] = true,
        }
    }
    // copy from the nearest regular vertex in graph order, then Euclidean distance
    for v in 0..n {
        if !fallback[v] {
            continue;
        }
        if let Some(src) = nearest_regular(mesh, &fallback, v) {
            let h = hessians[src];
            hessians[v] = h;
            gradients[v] = gradients[src] + h.apply(verts[v] - verts[src]);
        }
    }
    HessianRecovery { gradients, hessians, fallback }
}

fn nearest_regular(mesh: &TriMesh, fallback: &[bool], v: usize) -> Option<usize> {
    let mut seen = vec![false; mesh.num_vertices()];
    let mut frontier = VecDeque::from([v]);
    seen[v] = true;
    while !frontier.is_empty() {
        let mut next = VecDeque::new();
        let mut best: Option<(f64, usize)> = None;
        for &i in &frontier {
            for &j in mesh.neighbors(i) {
                if seen[j] {
                    continue;
                }
                seen[j] = true;
                if !fallback[j] {
                    let d = mesh.vertices()[j].dist(mesh.vertices()[v]);
                    if best.map_or(true, |(bd, bj)| d < bd || (d == bd && j < bj)) {
                        best = Some((d, j));
                    }
                }
                next.push_back(j);
            }
        }
        if let Some((_, j)) = best {
            return Some(j);
        }
        frontier = next;
    }
    None
}

fn fit_patch(mesh: &TriMesh, u: &[f64], v: usize, rings: usize) -> Option<(Vec2, Sym2)> {
    let verts = mesh.vertices();
    let xv = verts[v];
    // vertices within `rings - 1` hops; the patch is their incident triangles
    let mut centers = vec![v];
    let mut frontier = vec![v];
    for _ in 1..rings {
        let mut next = Vec::new();
        for &i in &frontier {
            for &j in mesh.neighbors(i) {
                if !centers.contains(&j) {
                    centers.push(j);
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut tris: Vec<usize> = centers.iter().flat_map(|&c| mesh.vertex_triangles(c).iter().copied()).collect();
    tris.sort_unstable();
    tris.dedup();
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(3 * tris.len());
    for &t in &tris {
        let tri = mesh.triangles()[t];
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();

    let scale = edges.iter().map(|&(a, b)| verts[a].dist(verts[b])).sum::<f64>() / edges.len() as f64;
    let mut ata = [[0.0f64; 5]; 5];
    let mut atb = [0.0f64; 5];
    for &(i, j) in &edges {
        let e = (verts[j] - verts[i]) / scale;
        let d = ((verts[i] + verts[j]) * 0.5 - xv) / scale;
        let row = [e.x, e.y, d.x * e.x, d.y * e.y, d.y * e.x + d.x * e.y];
        let rhs = u[j] - u[i];
        for r in 0..5 {
            atb[r] += row[r] * rhs;
            for c in 0..5 {
                ata[r][c] += row[r] * row[c];
            }
        }
    }
    let sol = solve5(ata, atb)?;
    let g = Vec2::new(sol[0], sol[1]) / scale;
    let s2 = scale * scale;
    Some((g, Sym2::new(sol[2] / s2, sol[4] / s2, sol[3] / s2)))
}

/// Gaussian elimination with partial pivoting; `None` for a near-singular system.
fn solve5(mut a: [[f64; 5]; 5], mut b: [f64; 5]) -> Option<[f64; 5]> {
    let norm = a.iter().flat_map(|r| r.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..5 {
        let piv = (col..5).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-10 * norm {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..5 {
            let f = a[r][col] / a[col][col];
            for c in col..5 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 5];
    for r in (0..5).rev() {
        let s: f64 = (r + 1..5).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}
