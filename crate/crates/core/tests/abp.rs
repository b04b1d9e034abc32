use std::f64::consts::PI;
use std::sync::Arc;

use abp_core::abp::{
    abp_dirichlet_ratio, contact_integral, eigen_chain_check, gradient_coverage, legendre_argmin, log_eigen_transform,
    lower_contact_set, rigidity_check, Integrand, CHAIN_CLIP, CHAIN_SLACK, DEFAULT_CLIP, RESIDUAL_TOL,
};
use abp_core::geometry::{triangulate, Sym2};
use abp_core::pde::{
    principal_eigen_fem, solve_dirichlet_fd, solve_neumann, Flux, GridDomain, OperatorCoeffs, ScalarField, SolverConfig,
};
use abp_core::{Error, HomogeneousWeight, Polygon, Vec2, DEFAULT_SEED};

fn cfg(h: f64) -> SolverConfig {
    SolverConfig { h, ..SolverConfig::default() }
}

fn neumann(poly: &Polygon, h: f64) -> abp_core::pde::NeumannSolution {
    let mesh = Arc::new(triangulate(poly, h).unwrap());
    solve_neumann(mesh, &HomogeneousWeight::constant(), &Flux::Unit, &cfg(h)).unwrap()
}

#[test]
fn contact_members_satisfy_supporting_plane_inequality() {
    let mesh = Arc::new(triangulate(&Polygon::l_shape(1.0, 0.5).unwrap(), 0.06).unwrap());
    let u = ScalarField::from_fn(mesh.clone(), |p| (p.x - 0.3).powi(2) + 0.5 * (p.y - 0.2).powi(4) - 0.4 * p.x * p.y);
    let g = lower_contact_set(&u, None);
    assert!(!g.is_empty());
    let pts = mesh.vertices();
    let vals = u.values();
    for (k, &i) in g.members.iter().enumerate() {
        let grad = g.gradients[k];
        let worst = (0..pts.len()).map(|j| vals[i] + grad.dot(pts[j] - pts[i]) - vals[j]).fold(f64::NEG_INFINITY, f64::max);
        assert!(worst <= g.epsilon + 1e-12, "member {i} lifted by {worst}");
    }
    // and every non-member is cut by some vertex
    for i in (0..pts.len()).filter(|i| !g.members.contains(i)) {
        let grad = u.gradient(i);
        let worst = (0..pts.len()).map(|j| vals[i] + grad.dot(pts[j] - pts[i]) - vals[j]).fold(f64::NEG_INFINITY, f64::max);
        assert!(worst > g.epsilon, "non-member {i}");
    }
}

#[test]
fn quartic_is_fully_in_contact_and_saddle_is_not() {
    let mesh = Arc::new(triangulate(&Polygon::rectangle(-1.0, -1.0, 2.0, 2.0).unwrap(), 0.08).unwrap());
    let quartic = ScalarField::from_fn(mesh.clone(), |p| p.norm_sq().powi(2));
    assert!(lower_contact_set(&quartic, None).area_fraction() >= 0.99);
    let saddle = ScalarField::from_fn(mesh, |p| p.x * p.x - p.y * p.y);
    let g = lower_contact_set(&saddle, None);
    assert!(g.area_fraction() < 0.1, "{}", g.area_fraction());
}

#[test]
fn contact_integral_of_paraboloid_is_gradient_image_area() {
    // ∇(a|x|²/2) maps the unit disc onto B_a, of area πa²
    let mesh = Arc::new(triangulate(&Polygon::regular_ngon(256, 1.0).unwrap(), 0.04).unwrap());
    for a in [0.5, 1.0, 3.0] {
        let u = ScalarField::from_fn(mesh.clone(), |p| 0.5 * a * p.norm_sq());
        let g = lower_contact_set(&u, None);
        let area = PI * (256.0 / (2.0 * PI) * (2.0 * PI / 256.0).sin());
        assert!((contact_integral(&g, &Integrand::Det) - a * a * area).abs() < 1e-8 * a * a);
        let radial = |r: f64| 1.0 / (1.0 + r * r);
        let v = contact_integral(&g, &Integrand::Radial(&radial));
        // ∫_{B_1} det D²u g(|∇u|) = 2π a² ∫₀¹ r/(1+a²r²) dr on the exact disc
        let exact = PI * (1.0 + a * a).ln();
        assert!((v - exact).abs() < 0.02 * exact, "{a}: {v} vs {exact}");
    }
}

#[test]
fn legendre_argmin_leaves_gradient_image_to_the_boundary() {
    let sol = neumann(&Polygon::regular_ngon(256, 1.0).unwrap(), 0.04);
    let mesh = sol.field.mesh().clone();
    let inside = legendre_argmin(&sol.field, Vec2::new(0.3, -0.2));
    assert!(mesh.vertices()[inside].dist(Vec2::new(0.3, -0.2)) < 0.08);
    assert!(!mesh.is_boundary_vertex(inside));
    let outside = legendre_argmin(&sol.field, Vec2::new(1.6, 0.4));
    assert!(mesh.is_boundary_vertex(outside));
}

#[test]
fn gradient_coverage_of_ellipse_and_determinism() {
    let sol = neumann(&Polygon::ellipse(1.0, 0.6, 256).unwrap(), 0.03);
    let disc = Polygon::regular_ngon(512, 1.0).unwrap();
    let a = gradient_coverage(&sol.field, &disc, 0.05, 1000, DEFAULT_SEED);
    // argmins for p near the unit circle sit at the ends of the major axis
    assert!(a.fraction >= 0.98, "{}", a.fraction);
    assert!(a.failures.iter().all(|f| f.hops < 2));
    let b = gradient_coverage(&sol.field, &disc, 0.05, 1000, DEFAULT_SEED);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn dirichlet_ratio_of_unit_square() {
    let dom = Arc::new(GridDomain::new(&Polygon::unit_square(), 0.01).unwrap());
    let u = solve_dirichlet_fd(dom, &OperatorCoeffs::laplacian(), &|_| -1.0, &cfg(0.01)).unwrap();
    let rep = abp_dirichlet_ratio(&u, &|_| -1.0, 1000, DEFAULT_SEED).unwrap();
    // sup of the torsion function over diam · |Ω|^{1/2}
    let expect = 0.0736713 / 2f64.sqrt();
    assert!((rep.ratio - expect).abs() < 0.05 * expect, "{}", rep.ratio);
    assert_eq!(rep.coverage, 1.0);
    assert!(rep.certificate(true).passed());
}

#[test]
fn dirichlet_ratio_of_disc_approaches_closed_form() {
    let poly = Polygon::regular_ngon(512, 1.0).unwrap();
    let closed = 1.0 / (8.0 * PI.sqrt());
    let ratio = |h: f64| {
        let dom = Arc::new(GridDomain::new(&poly, h).unwrap());
        let u = solve_dirichlet_fd(dom, &OperatorCoeffs::laplacian(), &|_| -1.0, &cfg(h)).unwrap();
        abp_dirichlet_ratio(&u, &|_| -1.0, 500, DEFAULT_SEED).unwrap().ratio
    };
    let (coarse, fine) = (ratio(0.04), ratio(0.01));
    assert!((fine - closed).abs() < (coarse - closed).abs());
    assert!((fine - closed).abs() < 0.02 * closed, "{fine} vs {closed}");
}

#[test]
fn log_transform_and_chain_on_disc() {
    let mesh = Arc::new(triangulate(&Polygon::regular_ngon(256, 1.0).unwrap(), 0.02).unwrap());
    let eig = principal_eigen_fem(mesh, &cfg(0.02)).unwrap();
    let lt = log_eigen_transform(&eig, DEFAULT_CLIP).unwrap();
    assert!(lt.residual <= RESIDUAL_TOL, "{}", lt.residual);
    assert!(matches!(log_eigen_transform(&eig, 1.0), Err(Error::Parameter(_))));

    let area = PI * (2.0 * PI / 256.0).sin() * 256.0 / (2.0 * PI);
    let chain_field = log_eigen_transform(&eig, CHAIN_CLIP).unwrap().field;
    let cert = eigen_chain_check(&chain_field, eig.lambda, area, 0.0, CHAIN_SLACK).unwrap();
    assert!(cert.passed(), "{}", cert.to_json());

    // both sides fall when λ doubles, so this is a sanity control only
    let doubled = eigen_chain_check(&chain_field, 2.0 * eig.lambda, area, 0.0, CHAIN_SLACK).unwrap();
    let (l1, l2) = (cert.link("area_formula").unwrap(), doubled.link("area_formula").unwrap());
    assert!(l2.lhs < l1.lhs);
    assert!(l2.rhs < l1.rhs);
    assert!(eigen_chain_check(&chain_field, 0.0, area, 0.0, CHAIN_SLACK).is_err());
}

#[test]
fn rigidity_separates_disc_ellipse_and_rectangle() {
    let dev = |poly: Polygon| {
        let sol = neumann(&poly, 0.02);
        let g = lower_contact_set(&sol.field, None);
        rigidity_check(&g, sol.b_omega).mean_deviation
    };
    let disc = dev(Polygon::regular_ngon(256, 1.0).unwrap());
    let ellipse = dev(Polygon::ellipse(1.0, 0.5, 256).unwrap());
    let rect = dev(Polygon::rectangle(0.0, 0.0, 2.0, 1.0).unwrap());
    // u = (x−1)²/2 + (y−1/2)² on [0,2]×[0,1], so D²u = diag(1, 2) and a = 3/2
    let oracle = Sym2::new(1.0, 0.0, 2.0).sub(Sym2::identity().scaled(1.5)).frobenius() / 1.5;
    assert!(disc < 0.05, "{disc}");
    assert!(disc < ellipse && ellipse < rect, "{disc} {ellipse} {rect}");
    assert!((rect - oracle).abs() < 0.01, "{rect} vs {oracle}");
}
