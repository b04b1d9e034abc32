use std::f64::consts::PI;

use abp_core::geometry::{
    ball_constants, gauge_check, perimeter_weighted, relative_perimeter, triangulate, wulff_shape, MIN_ANGLE_DEG,
};
use abp_core::{ConvexCone, Gauge, HomogeneousWeight, Polygon, Vec2};
use statrs::function::gamma::gamma;

fn quarter_disc(n: usize) -> Polygon {
    Polygon::sector(1.0, 0.0, PI / 2.0, n).unwrap()
}

#[test]
fn ball_constants_match_gamma_function() {
    for n in 1..=9u32 {
        let (vol, per) = ball_constants(n).unwrap();
        let oracle = PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0);
        assert!((vol - oracle).abs() < 1e-12 * oracle, "n = {n}");
        assert!((per - n as f64 * oracle).abs() < 1e-12 * per, "n = {n}");
    }
    assert!(ball_constants(0).is_err());
}

#[test]
fn ngon_area_and_perimeter_closed_forms() {
    for n in [3usize, 4, 7, 64, 512] {
        let p = Polygon::regular_ngon(n, 1.0).unwrap();
        let t = 2.0 * PI / n as f64;
        assert!((p.area() - 0.5 * n as f64 * t.sin()).abs() < 1e-12);
        assert!((p.perimeter() - 2.0 * n as f64 * (t / 2.0).sin()).abs() < 1e-12);
    }
}

#[test]
fn weighted_perimeter_of_quarter_disc() {
    let xy = HomogeneousWeight::monomial(1.0, 1.0).unwrap();
    let q = ConvexCone::quadrant();
    let p = perimeter_weighted(&quarter_disc(512), &q, &Gauge::euclidean(), &xy).unwrap();
    // ∫₀^{π/2} cos θ sin θ dθ on the arc, nothing on the axes
    assert!((p - 0.5).abs() < 1e-5, "{p}");
    let rel = relative_perimeter(&quarter_disc(512), &q).unwrap();
    assert!((rel - PI / 2.0).abs() < 1e-4);
}

#[test]
fn weighted_perimeter_scales_with_degree_plus_one() {
    let poly = Polygon::annular_sector(0.3, 1.1, 0.2, 1.3, 40).unwrap();
    let q = ConvexCone::quadrant();
    let h = Gauge::l1(256).unwrap();
    for (a1, a2) in [(0.0, 0.0), (1.0, 1.0), (1.5, 0.5)] {
        let w = HomogeneousWeight::monomial(a1, a2).unwrap();
        let p1 = perimeter_weighted(&poly, &q, &h, &w).unwrap();
        for t in [0.5, 2.0, 3.0] {
            let pt = perimeter_weighted(&poly.scaled(t).unwrap(), &q, &h, &w).unwrap();
            let expect = t.powf(1.0 + a1 + a2) * p1;
            assert!((pt - expect).abs() < 1e-10 * expect, "t = {t}, {pt} vs {expect}");
        }
    }
}

#[test]
fn euclidean_perimeter_is_translation_and_rotation_invariant() {
    let poly = Polygon::l_shape(1.0, 0.4).unwrap();
    let one = HomogeneousWeight::constant();
    let e = Gauge::euclidean();
    let full = ConvexCone::FullPlane;
    let p0 = perimeter_weighted(&poly, &full, &e, &one).unwrap();
    let (c, s) = (0.7f64.cos(), 0.7f64.sin());
    let moved = poly.transformed([[c, -s], [s, c]]).unwrap().translated(Vec2::new(3.0, -2.0));
    let p1 = perimeter_weighted(&moved, &full, &e, &one).unwrap();
    assert!((p0 - p1).abs() < 1e-12);
    assert!((p0 - poly.perimeter()).abs() < 1e-12);
}

#[test]
fn polyhedral_wulff_shapes() {
    let sq = wulff_shape(&Gauge::l1(512).unwrap(), 512).unwrap();
    assert!((sq.polygon.area() - 4.0).abs() < 1e-4);
    let (per, area) = sq.perimeter_and_area();
    assert!((per - 2.0 * area).abs() < 1e-9);
    let diamond = wulff_shape(&Gauge::linf(512).unwrap(), 512).unwrap();
    assert!((diamond.polygon.area() - 2.0).abs() < 1e-4);
    for v in diamond.polygon.vertices() {
        assert!(v.x.abs() + v.y.abs() < 1.0 + 1e-9);
    }
}

#[test]
fn wulff_shape_of_support_function_is_the_hull() {
    let pts = [Vec2::new(1.0, 0.2), Vec2::new(-0.5, 0.9), Vec2::new(-0.6, -0.7), Vec2::new(0.4, -1.1)];
    let hull = Polygon::convex_hull(&pts).unwrap();
    let excess = |m: usize| {
        let w = wulff_shape(&Gauge::support_of(&pts, m).unwrap(), m).unwrap();
        for p in pts {
            assert!(w.polygon.contains(p * 0.999));
        }
        w.polygon.area() - hull.area()
    };
    // sampled half-planes circumscribe the hull; edges whose normal is not
    // sampled leave a sliver of width O(Δθ)
    let (coarse, fine) = (excess(720), excess(1440));
    assert!(fine >= -1e-12 && fine < 5e-3 * hull.area(), "{fine}");
    assert!((coarse / fine - 2.0).abs() < 0.5, "{coarse} {fine}");
}

#[test]
fn nonconvex_gauge_is_rejected() {
    let bumpy = Gauge::from_fn(256, |v| 1.0 + 0.6 * (4.0 * v.angle()).cos()).unwrap();
    let rep = gauge_check(&bumpy);
    assert!(!rep.pass && rep.worst_sublinearity > 0.0);
}

#[test]
fn meshes_cover_the_domain_with_bounded_angles() {
    for (poly, h) in [
        (Polygon::unit_square(), 0.05),
        (Polygon::regular_ngon(128, 1.0).unwrap(), 0.04),
        (Polygon::l_shape(1.0, 0.5).unwrap(), 0.03),
        (quarter_disc(128).translated(Vec2::new(0.01, 0.01)), 0.04),
    ] {
        let m = triangulate(&poly, h).unwrap();
        assert!((m.total_area() - poly.area()).abs() < 1e-10 * poly.area());
        let (min_angle, max_edge) = m.quality();
        assert!(min_angle >= MIN_ANGLE_DEG - 1e-9, "{min_angle}");
        assert!(max_edge <= 1.5 * h, "{max_edge}");
    }
}

#[test]
fn cone_clip_and_shrink() {
    let q = ConvexCone::quadrant();
    let disc = Polygon::regular_ngon(256, 1.0).unwrap();
    let clipped = q.clip(&disc).unwrap();
    assert!((clipped.area() - disc.area() / 4.0).abs() < 1e-12);
    let moved = q.shrink_into(&clipped, 0.01);
    assert!(moved.vertices().iter().all(|&v| q.boundary_distance(v) >= 0.01 - 1e-12 && q.contains(v)));
}
