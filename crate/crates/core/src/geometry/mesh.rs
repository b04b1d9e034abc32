use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use spade::handles::FixedFaceHandle;
use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};

use super::{ConvexCone, Polygon, Vec2};
use crate::{Error, Result};

/// Minimum triangle angle guaranteed by [`triangulate`] away from sharp corners.
pub const MIN_ANGLE_DEG: f64 = 20.0;

/// A boundary edge of a [`TriMesh`], oriented counterclockwise around the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    /// Outward unit normal.
    pub normal: Vec2,
    /// The edge lies on the boundary of the cone the mesh was marked with.
    pub on_cone_boundary: bool,
}

/// Conforming triangle mesh of a planar domain. Triangles are counterclockwise.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<Vec2>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
    h: f64,
    is_boundary: Vec<bool>,
    vertex_triangles: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
}

impl TriMesh {
    /// Assembles a mesh from raw parts; boundary edges are recovered as the
    /// edges with exactly one incident triangle.
    pub fn from_parts(vertices: Vec<Vec2>, mut triangles: Vec<[usize; 3]>, h: f64) -> Result<Self> {
        let nv = vertices.len();
        for t in triangles.iter_mut() {
            if t.iter().any(|&i| i >= nv) {
                return Err(Error::Geometry(format!("triangle {t:?} references a missing vertex")));
            }
            let a = signed_tri_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            if a == 0.0 {
                return Err(Error::Geometry(format!("zero-area triangle {t:?}")));
            }
            if a < 0.0 {
                t.swap(1, 2);
            }
        }
        let mut edge_count: HashMap<(usize, usize), (usize, (usize, usize))> = HashMap::new();
        for t in &triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                edge_count.entry(key).or_insert((0, (a, b))).0 += 1;
            }
        }
        let mut boundary_edges: Vec<BoundaryEdge> = edge_count
            .values()
            .filter(|(c, _)| *c == 1)
            .map(|&(_, (a, b))| {
                let normal = (vertices[b] - vertices[a]).perp_cw().normalized();
                BoundaryEdge { a, b, normal, on_cone_boundary: false }
            })
            .collect();
        if edge_count.values().any(|(c, _)| *c > 2) {
            return Err(Error::Geometry("non-manifold edge in triangulation".into()));
        }
        boundary_edges.sort_by_key(|e| (e.a, e.b));
        let mut is_boundary = vec![false; nv];
        for e in &boundary_edges {
            is_boundary[e.a] = true;
            is_boundary[e.b] = true;
        }
        let mut vertex_triangles = vec![Vec::new(); nv];
        let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (ti, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                vertex_triangles[t[k]].push(ti);
                for j in 0..3 {
                    if j != k {
                        neighbors[t[k]].push(t[j]);
                    }
                }
            }
        }
        for n in neighbors.iter_mut() {
            n.sort_unstable();
            n.dedup();
        }
        Ok(TriMesh { vertices, triangles, boundary_edges, h, is_boundary, vertex_triangles, neighbors })
    }

    /// Fan triangulation of a polygon that is star-shaped with respect to
    /// `center` (which becomes an extra vertex). Intended for quadrature.
    pub fn fan(poly: &Polygon, center: Vec2) -> Result<Self> {
        let n = poly.len();
        let mut vertices = poly.vertices().to_vec();
        let c = vertices.len();
        let mut triangles = Vec::with_capacity(n);
        let h = poly.edges().map(|(a, b)| a.dist(b)).fold(0.0, f64::max);
        // a center that coincides with a polygon vertex is reused
        let apex = vertices.iter().position(|v| v.dist(center) < 1e-14);
        if apex.is_none() {
            vertices.push(center);
        }
        let ci = apex.unwrap_or(c);
        for i in 0..n {
            let j = (i + 1) % n;
            if i == ci || j == ci {
                continue;
            }
            if signed_tri_area(vertices[ci], vertices[i], vertices[j]) <= 0.0 {
                return Err(Error::Geometry("polygon is not star-shaped about the fan center".into()));
            }
            triangles.push([ci, i, j]);
        }
        TriMesh::from_parts(vertices, triangles, h)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    /// Target edge length the mesh was generated for.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_boundary_vertex(&self, i: usize) -> bool {
        self.is_boundary[i]
    }

    pub fn vertex_triangles(&self, i: usize) -> &[usize] {
        &self.vertex_triangles[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn triangle_points(&self, t: usize) -> [Vec2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        signed_tri_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Lumped (barycentric) area share of each vertex.
    pub fn lumped_areas(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            let a = self.triangle_area(t) / 3.0;
            for &i in tri {
                out[i] += a;
            }
        }
        out
    }

    /// Graph distance (edge hops) from every vertex to the nearest boundary vertex.
    pub fn boundary_hops(&self) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertices.len()];
        let mut queue = VecDeque::new();
        for (i, &b) in self.is_boundary.iter().enumerate() {
            if b {
                dist[i] = 0;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &j in &self.neighbors[i] {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    /// Euclidean distance from each vertex to the mesh boundary.
    pub fn boundary_distances(&self) -> Vec<f64> {
        self.vertices
            .iter()
            .map(|&p| {
                self.boundary_edges
                    .iter()
                    .map(|e| super::polygon::point_segment_distance(p, self.vertices[e.a], self.vertices[e.b]))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    /// Flags boundary edges lying on the boundary rays of `cone`.
    pub fn mark_cone_boundary(&mut self, cone: &ConvexCone) {
        let tol = 1e-10 * self.h.max(1e-300);
        for e in self.boundary_edges.iter_mut() {
            e.on_cone_boundary = cone.segment_on_boundary(self.vertices[e.a], self.vertices[e.b], tol);
        }
    }

    /// The submesh of triangles whose three vertices satisfy `keep`, with
    /// vertices renumbered. Returns the submesh and the map new -> old index.
    pub fn submesh(&self, keep: impl Fn(usize) -> bool) -> Result<(TriMesh, Vec<usize>)> {
        let mut old_to_new = vec![usize::MAX; self.vertices.len()];
        let mut new_to_old = Vec::new();
        let mut tris = Vec::new();
        for t in &self.triangles {
            if t.iter().all(|&i| keep(i)) {
                let mut nt = [0; 3];
                for k in 0..3 {
                    let i = t[k];
                    if old_to_new[i] == usize::MAX {
                        old_to_new[i] = new_to_old.len();
                        new_to_old.push(i);
                    }
                    nt[k] = old_to_new[i];
                }
                tris.push(nt);
            }
        }
        if tris.is_empty() {
            return Err(Error::Geometry("submesh selection is empty".into()));
        }
        let verts = new_to_old.iter().map(|&i| self.vertices[i]).collect();
        Ok((TriMesh::from_parts(verts, tris, self.h)?, new_to_old))
    }

    /// `(min angle in degrees, max edge length)` over all triangles.
    pub fn quality(&self) -> (f64, f64) {
        let mut min_angle = f64::INFINITY;
        let mut max_edge: f64 = 0.0;
        for t in 0..self.triangles.len() {
            let p = self.triangle_points(t);
            min_angle = min_angle.min(min_triangle_angle(p));
            for k in 0..3 {
                max_edge = max_edge.max(p[k].dist(p[(k + 1) % 3]));
            }
        }
        (min_angle.to_degrees(), max_edge)
    }
}

pub(crate) fn signed_tri_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    0.5 * (b - a).cross(c - a)
}

fn min_triangle_angle(p: [Vec2; 3]) -> f64 {
    (0..3)
        .map(|k| {
            let u = p[(k + 1) % 3] - p[k];
            let v = p[(k + 2) % 3] - p[k];
            u.cross(v).abs().atan2(u.dot(v))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Quality triangulation of `poly` with target edge length `h`.
///
/// Boundary edges are pre-split at spacing at most `h`, the interior is seeded
/// with a hexagonal lattice of spacing `h`, and a constrained Delaunay
/// refinement removes angles below [`MIN_ANGLE_DEG`]. The result has maximum
/// edge `<= 2h`, minimum angle `>= 20°` except in triangles incident to input
/// corners sharper than 60°, and total area equal to the polygon area.
pub fn triangulate(poly: &Polygon, h: f64) -> Result<TriMesh> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Parameter(format!("mesh size must be positive, got {h}")));
    }
    let area = poly.area();
    let width = 2.0 * area / poly.perimeter();
    if width < 0.25 * h {
        return Err(Error::Mesh {
            message: format!("domain too thin for target edge length (area/perimeter width {width:.3e})"),
            min_angle_deg: 0.0,
            max_edge: f64::NAN,
            h,
        });
    }

    let mut points: Vec<Point2<f64>> = Vec::new();
    let mut constraints: Vec<[usize; 2]> = Vec::new();
    let nv = poly.len();
    let mut corner_ids = Vec::with_capacity(nv);
    let lens: Vec<f64> = poly.edges().map(|(a, b)| a.dist(b)).collect();
    let natural: Vec<f64> = lens.iter().map(|&l| l / (l / h).ceil().max(1.0)).collect();
    for (i, (a, b)) in poly.edges().enumerate() {
        let start = natural[i].min(natural[(i + nv - 1) % nv]);
        let end = natural[i].min(natural[(i + 1) % nv]);
        corner_ids.push(points.len());
        points.push(Point2::new(a.x, a.y));
        for t in graded_breaks(lens[i], start, end, natural[i]) {
            let p = a + (b - a) * (t / lens[i]);
            points.push(Point2::new(p.x, p.y));
        }
    }
    let nb = points.len();
    for i in 0..nb {
        constraints.push([i, (i + 1) % nb]);
    }

    // hexagonal interior lattice kept clear of the boundary
    let (lo, hi) = poly.bounding_box();
    let dy = h * 3f64.sqrt() / 2.0;
    let clearance = 0.6 * h;
    let rows = ((hi.y - lo.y) / dy).ceil() as usize + 1;
    let cols = ((hi.x - lo.x) / h).ceil() as usize + 2;
    for j in 0..rows {
        let y = lo.y + (j as f64 + 0.5) * dy;
        let shift = if j % 2 == 0 { 0.25 * h } else { 0.75 * h };
        for i in 0..cols {
            let p = Vec2::new(lo.x + shift + i as f64 * h, y);
            if poly.contains(p) && poly.distance_to_boundary(p) >= clearance {
                points.push(Point2::new(p.x, p.y));
            }
        }
    }

    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> =
        ConstrainedDelaunayTriangulation::bulk_load_cdt(points, constraints)
            .map_err(|e| mesh_err(format!("constrained triangulation failed: {e:?}"), h))?;
    let params = RefinementParameters::<f64>::new()
        .with_angle_limit(AngleLimit::from_deg(25.0))
        .with_max_allowed_area(0.5 * h * h)
        .exclude_outer_faces(true)
        .with_max_additional_vertices(20 * cdt.num_vertices() + 1000);
    let result = cdt.refine(params);
    if !result.refinement_complete {
        return Err(mesh_err("refinement ran out of Steiner vertices".into(), h));
    }
    let excluded: std::collections::HashSet<FixedFaceHandle<spade::handles::InnerTag>> =
        result.excluded_faces.into_iter().collect();

    let vertices: Vec<Vec2> = cdt.vertices().map(|v| Vec2::new(v.position().x, v.position().y)).collect();
    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        if excluded.contains(&face.fix()) {
            continue;
        }
        let vs = face.vertices();
        let tri = [vs[0].fix().index(), vs[1].fix().index(), vs[2].fix().index()];
        let c = (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
        if poly.contains(c) {
            triangles.push(tri);
        }
    }
    // drop vertices that ended up outside (none for a closed constraint loop)
    let mut used = vec![false; vertices.len()];
    for t in &triangles {
        for &i in t {
            used[i] = true;
        }
    }
    let mut remap = vec![usize::MAX; vertices.len()];
    let mut verts = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        if used[i] {
            remap[i] = verts.len();
            verts.push(*v);
        }
    }
    for t in triangles.iter_mut() {
        for i in t.iter_mut() {
            *i = remap[*i];
        }
    }
    let mesh = TriMesh::from_parts(verts, triangles, h)?;

    let rel = (mesh.total_area() - area).abs() / area;
    if rel > 1e-10 {
        return Err(mesh_err(format!("mesh area deviates from polygon area by {rel:.2e}"), h));
    }

    // quality check, ignoring triangles at input corners sharper than 60°
    let angles = poly.interior_angles();
    let sharp: Vec<Vec2> = poly
        .vertices()
        .iter()
        .zip(&angles)
        .filter(|(_, &a)| a < PI / 3.0)
        .map(|(v, _)| *v)
        .collect();
    let mut min_angle = f64::INFINITY;
    let mut max_edge: f64 = 0.0;
    for t in 0..mesh.triangles().len() {
        let p = mesh.triangle_points(t);
        for k in 0..3 {
            max_edge = max_edge.max(p[k].dist(p[(k + 1) % 3]));
        }
        if sharp.iter().any(|s| p.iter().any(|q| q.dist(*s) == 0.0)) {
            continue;
        }
        min_angle = min_angle.min(min_triangle_angle(p));
    }
    let min_angle = min_angle.to_degrees();
    if min_angle < MIN_ANGLE_DEG || max_edge > 2.0 * h {
        return Err(Error::Mesh {
            message: "quality targets not reached".into(),
            min_angle_deg: min_angle,
            max_edge,
            h,
        });
    }
    Ok(mesh)
}

/// Growth factor of consecutive boundary subedges near a finer corner.
const GRADING: f64 = 1.5;

/// Interior break positions along an edge of length `len`: subedges grow by
/// [`GRADING`] from `start` and `end` spacing at the two ends up to `step`,
/// uniform in between.
fn graded_breaks(len: f64, start: f64, end: f64, step: f64) -> Vec<f64> {
    let ramp = |from: f64| {
        let mut out = Vec::new();
        let mut s = from * GRADING;
        while s < step {
            out.push(s);
            s *= GRADING;
        }
        out
    };
    let (left, right) = (ramp(start), ramp(end));
    let used: f64 = left.iter().chain(&right).sum();
    let uniform = |n: usize| (1..n).map(|k| len * k as f64 / n as f64).collect::<Vec<f64>>();
    if used >= len - step {
        return uniform((len / step).round().max(1.0) as usize);
    }
    let mut out = Vec::new();
    let mut pos = 0.0;
    for s in &left {
        pos += s;
        out.push(pos);
    }
    let middle = len - used;
    let n = (middle / step).ceil().max(1.0) as usize;
    for k in 1..n {
        out.push(pos + middle * k as f64 / n as f64);
    }
    pos += middle;
    for s in right.iter().rev() {
        out.push(pos);
        pos += s;
    }
    out
}

fn mesh_err(message: String, h: f64) -> Error {
    Error::Mesh { message, min_angle_deg: f64::NAN, max_edge: f64::NAN, h }
}
