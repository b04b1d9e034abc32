use std::f64::consts::PI;
use std::sync::Arc;

use abp_core::geometry::{triangulate, Sym2};
use abp_core::pde::{
    hessian_recover, principal_eigen_fd, principal_eigen_fem, solve_dirichlet_fd, solve_neumann, Flux, GridDomain,
    OperatorCoeffs, ScalarField, SolverConfig, DEFAULT_RECOVERY_RINGS,
};
use abp_core::{HomogeneousWeight, Polygon, TriMesh, Vec2};
use nalgebra::{DMatrix, DVector};

fn cfg(h: f64) -> SolverConfig {
    SolverConfig { h, ..SolverConfig::default() }
}

/// Torsion function of the unit square at its center, `Δu = −1`, by the
/// double sine series.
fn square_torsion_center() -> f64 {
    let mut s = 0.0;
    for m in (1..4000).step_by(2) {
        for n in (1..4000).step_by(2) {
            let sign = if ((m - 1) / 2 + (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let (m, n) = (m as f64, n as f64);
            s += sign * 16.0 / (PI.powi(4) * m * n * (m * m + n * n));
        }
    }
    s
}

/// `2u_xx + u_yy = −1` on the unit disc, `u = 0` on the circle, by least-squares
/// collocation with `u = (1 − |x|²) Σ c_ab x^{2a} y^{2b}`. Returns `u(0)`.
fn anisotropic_disc_center(degree: usize) -> f64 {
    let mut monos = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            monos.push((2 * a, 2 * b));
        }
    }
    let mut pts = Vec::new();
    for i in 0..40 {
        for j in 0..40 {
            let r = (i as f64 + 0.5) / 40.0;
            let t = 2.0 * PI * (j as f64 + 0.5) / 40.0;
            pts.push(Vec2::from_angle(t) * r);
        }
    }
    let pw = |x: f64, k: i32| if k < 0 { 0.0 } else { x.powi(k) };
    let a = DMatrix::from_fn(pts.len(), monos.len(), |r, c| {
        let (x, y) = (pts[r].x, pts[r].y);
        let (ea, eb) = (monos[c].0 as i32, monos[c].1 as i32);
        let m = pw(x, ea) * pw(y, eb);
        let mxx = (ea * (ea - 1)) as f64 * pw(x, ea - 2) * pw(y, eb);
        let myy = (eb * (eb - 1)) as f64 * pw(x, ea) * pw(y, eb - 2);
        let q = 1.0 - x * x - y * y;
        -(6.0 + 8.0 * ea as f64 + 4.0 * eb as f64) * m + q * (2.0 * mxx + myy)
    });
    let rhs = DVector::from_element(pts.len(), -1.0);
    let c = a.svd(true, true).solve(&rhs, 1e-14).unwrap();
    c[0]
}

/// Hessian of the quadratic Taylor fit to vertex values within `rings` hops of
/// `v`, by dense least squares.
fn taylor_fit_hessian(mesh: &TriMesh, u: &[f64], v: usize, rings: usize) -> Sym2 {
    let mut patch = vec![v];
    let mut frontier = vec![v];
    for _ in 0..rings {
        let mut next = Vec::new();
        for &i in &frontier {
            for &j in mesh.neighbors(i) {
                if !patch.contains(&j) {
                    patch.push(j);
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let xv = mesh.vertices()[v];
    let s = mesh.h();
    let a = DMatrix::from_fn(patch.len(), 6, |r, c| {
        let d = (mesh.vertices()[patch[r]] - xv) / s;
        [1.0, d.x, d.y, d.x * d.x / 2.0, d.x * d.y, d.y * d.y / 2.0][c]
    });
    let b = DVector::from_iterator(patch.len(), patch.iter().map(|&i| u[i]));
    let ata = a.transpose() * &a;
    let c = ata.cholesky().unwrap().solve(&(a.transpose() * b));
    Sym2::new(c[3], c[4], c[5]).scaled(1.0 / (s * s))
}

#[test]
fn neumann_solution_of_disc_is_the_paraboloid() {
    let mesh = Arc::new(triangulate(&Polygon::regular_ngon(512, 1.0).unwrap(), 0.04).unwrap());
    let sol = solve_neumann(mesh.clone(), &HomogeneousWeight::constant(), &Flux::Unit, &cfg(0.04)).unwrap();
    let exact = ScalarField::from_fn(mesh, |x| x.norm_sq() / 2.0);
    let shift = exact.mean();
    let err = (0..exact.values().len()).map(|i| (sol.field.value(i) - exact.value(i) + shift).abs()).fold(0.0, f64::max);
    assert!(err < 5e-3, "{err}");
    assert!((sol.b_omega - 2.0).abs() < 1e-2);
    assert!(sol.field.mean().abs() < 1e-10);
}

#[test]
fn neumann_square_has_b_four_and_unit_hessian() {
    let mesh = Arc::new(triangulate(&Polygon::unit_square(), 0.04).unwrap());
    let sol = solve_neumann(mesh.clone(), &HomogeneousWeight::constant(), &Flux::Unit, &cfg(0.04)).unwrap();
    assert!((sol.b_omega - 4.0).abs() < 1e-9);
    let hops = mesh.boundary_hops();
    let interior: Vec<usize> = (0..mesh.num_vertices()).filter(|&i| hops[i] >= 2).collect();
    let worst = interior.iter().map(|&i| sol.field.hessian(i).sub(Sym2::identity().scaled(2.0)).max_abs()).fold(0.0, f64::max);
    assert!(worst < 0.05, "{worst}");
}

#[test]
fn weighted_neumann_compatibility_on_quarter_annulus() {
    let poly = Polygon::annular_sector(0.5, 1.0, 0.0, PI / 2.0, 64).unwrap().translated(Vec2::new(0.01, 0.01));
    let w = HomogeneousWeight::monomial(1.0, 1.0).unwrap();
    let mesh = Arc::new(triangulate(&poly, 0.04).unwrap());
    let sol = solve_neumann(mesh, &w, &Flux::Unit, &cfg(0.04)).unwrap();
    assert!(sol.compatibility_defect < 1e-12);
    assert!((sol.b_omega - sol.boundary_load / sol.measure).abs() < 1e-12);
}

#[test]
fn torsion_of_unit_square_matches_series() {
    let oracle = square_torsion_center();
    assert!((oracle - 0.0736713).abs() < 1e-6, "{oracle}");
    let dom = Arc::new(GridDomain::new(&Polygon::unit_square(), 0.01).unwrap());
    let u = solve_dirichlet_fd(dom.clone(), &OperatorCoeffs::laplacian(), &|_| -1.0, &cfg(0.01)).unwrap();
    assert!((u.max() - oracle).abs() < 1e-4, "{} vs {oracle}", u.max());
    let u2 = solve_dirichlet_fd(dom, &OperatorCoeffs::laplacian(), &|_| -2.0, &cfg(0.01)).unwrap();
    assert!((u2.max() - 2.0 * u.max()).abs() < 1e-8);
}

#[test]
fn anisotropic_disc_matches_collocation() {
    // the collocation recovers the radial profile (1 − r²)/6
    let oracle = anisotropic_disc_center(8);
    assert!((oracle - anisotropic_disc_center(10)).abs() < 1e-8);
    assert!((oracle - 1.0 / 6.0).abs() < 1e-10);
    let a = Sym2::new(2.0, 0.0, 1.0);
    let err = |h: f64| {
        let dom = Arc::new(GridDomain::new(&Polygon::regular_ngon(256, 1.0).unwrap(), h).unwrap());
        let u = solve_dirichlet_fd(dom, &OperatorCoeffs::constant(a, Vec2::ZERO), &|_| -1.0, &cfg(h)).unwrap();
        (u.nearest_value(Vec2::ZERO) - oracle).abs()
    };
    let (coarse, fine) = (err(0.02), err(0.01));
    assert!(fine < 1e-2 && fine < coarse, "{coarse} {fine}");
}

#[test]
fn anisotropic_ellipse_has_closed_form() {
    // x²/2 + y² < 1 with 2u_xx + u_yy = −1 gives u = (1 − x²/2 − y²)/4
    let poly = Polygon::ellipse(2f64.sqrt(), 1.0, 256).unwrap();
    let dom = Arc::new(GridDomain::new(&poly, 0.01).unwrap());
    let a = Sym2::new(2.0, 0.0, 1.0);
    let u = solve_dirichlet_fd(dom, &OperatorCoeffs::constant(a, Vec2::ZERO), &|_| -1.0, &cfg(0.01)).unwrap();
    assert!((u.max() - 0.25).abs() < 5e-3, "{}", u.max());
}

#[test]
fn recovered_hessians_match_dense_taylor_fit() {
    let mesh = triangulate(&Polygon::regular_ngon(64, 1.0).unwrap(), 0.08).unwrap();
    let quad: Vec<f64> = mesh.vertices().iter().map(|p| p.x * p.x + 0.5 * p.y * p.y + 0.3 * p.x * p.y - p.x).collect();
    let rec = hessian_recover(&mesh, &quad, DEFAULT_RECOVERY_RINGS);
    let hops = mesh.boundary_hops();
    let mut checked = 0;
    for v in 0..mesh.num_vertices() {
        if hops[v] < 2 {
            continue;
        }
        let oracle = taylor_fit_hessian(&mesh, &quad, v, 2);
        assert!(oracle.sub(Sym2::new(2.0, 0.3, 1.0)).max_abs() < 1e-9, "{oracle:?}");
        assert!(rec.hessians[v].sub(oracle).max_abs() < 1e-8, "vertex {v}");
        checked += 1;
    }
    assert!(checked > 50);

    // Non-quadratic data: both fits approximate the true Hessian to O(h).
    let f = |p: Vec2| (1.3 * p.x).sin() * (0.7 * p.y).cos();
    let hess = |p: Vec2| {
        let (s, c) = ((1.3 * p.x).sin(), (0.7 * p.y).cos());
        let (cs, sn) = ((1.3 * p.x).cos(), (0.7 * p.y).sin());
        Sym2::new(-1.69 * s * c, -0.91 * cs * sn, -0.49 * s * c)
    };
    let vals: Vec<f64> = mesh.vertices().iter().map(|&p| f(p)).collect();
    let rec = hessian_recover(&mesh, &vals, DEFAULT_RECOVERY_RINGS);
    let (mut e_impl, mut e_oracle) = (0.0f64, 0.0f64);
    for v in (0..mesh.num_vertices()).filter(|&v| hops[v] >= 2) {
        let p = mesh.vertices()[v];
        e_impl = e_impl.max(rec.hessians[v].sub(hess(p)).max_abs());
        e_oracle = e_oracle.max(taylor_fit_hessian(&mesh, &vals, v, 2).sub(hess(p)).max_abs());
    }
    assert!(e_impl < 0.1 && e_impl < 3.0 * e_oracle + 1e-3, "{e_impl} vs {e_oracle}");
}

#[test]
fn hessian_of_sampled_quadratic_on_mesh() {
    let mesh = Arc::new(triangulate(&Polygon::unit_square(), 0.05).unwrap());
    let u = ScalarField::from_fn(mesh.clone(), |p| p.x * p.x / 2.0 + 2.0 * p.y * p.y);
    for v in 0..mesh.num_vertices() {
        assert!(u.hessian(v).sub(Sym2::new(1.0, 0.0, 4.0)).max_abs() < 1e-8);
    }
}

#[test]
fn eigenvalues_of_disc_and_square() {
    let j = abp_core::special::j0_first_zero();
    let disc = Arc::new(triangulate(&Polygon::regular_ngon(256, 1.0).unwrap(), 0.03).unwrap());
    let e = principal_eigen_fem(disc, &cfg(0.03)).unwrap();
    assert!((e.lambda - j * j).abs() < 0.01 * j * j);
    assert!(e.residual < 1e-6);
    let sq = Arc::new(GridDomain::new(&Polygon::unit_square(), 0.02).unwrap());
    let e = principal_eigen_fd(sq, &OperatorCoeffs::laplacian(), &cfg(0.02)).unwrap();
    assert!((e.lambda - 2.0 * PI * PI).abs() < 0.01 * 2.0 * PI * PI);
    let phi = e.grid_field().unwrap();
    assert!(phi.values.iter().all(|&v| v >= 0.0));
    assert!((phi.max() - 1.0).abs() < 1e-12);
}

#[test]
fn drift_shifts_square_eigenvalue_by_quarter_drift_squared() {
    let exact = 2.0 * PI * PI + 0.25;
    let coeffs = OperatorCoeffs::constant(Sym2::identity(), Vec2::new(1.0, 0.0));
    let mut errs = Vec::new();
    for h in [0.04, 0.02, 0.01] {
        let dom = Arc::new(GridDomain::new(&Polygon::unit_square(), h).unwrap());
        let e = principal_eigen_fd(dom, &coeffs, &cfg(h)).unwrap();
        assert!(e.residual < 1e-6);
        errs.push((e.lambda - exact).abs());
    }
    assert!(errs[2] < errs[1] && errs[1] < errs[0], "{errs:?}");
    assert!(errs[2] < 0.005 * exact, "{errs:?}");
}

#[test]
fn eigenvalue_decreases_under_domain_growth() {
    let lam = |s: f64| {
        let dom = Arc::new(GridDomain::new(&Polygon::rectangle(0.0, 0.0, s, s).unwrap(), 0.02).unwrap());
        principal_eigen_fd(dom, &OperatorCoeffs::laplacian(), &cfg(0.02)).unwrap().lambda
    };
    let (a, b) = (lam(1.0), lam(1.1));
    assert!(b < a);
    assert!((a / b - 1.21).abs() < 0.02);
}
