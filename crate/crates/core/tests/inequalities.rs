use std::f64::consts::PI;

use abp_core::inequalities::{
    abp_trace, abp_trace_full, cone_report, corpus_reports, default_corpus, eigen_trace, faber_krahn_report,
    isoperimetric_report, seeded_bumps, sobolev_check, sobolev_quotient, wulff_identity_check, wulff_report, Corpus,
    TestFunction, Theorem, TraceSpec,
};
use abp_core::pde::SolverConfig;
use abp_core::{ConvexCone, Error, Gauge, HomogeneousWeight, Polygon, Vec2, DEFAULT_SEED};

fn cfg(h: f64) -> SolverConfig {
    SolverConfig { h, ..SolverConfig::default() }
}

fn xy() -> HomogeneousWeight {
    HomogeneousWeight::monomial(1.0, 1.0).unwrap()
}

#[test]
fn classical_quotients_and_equality_case() {
    let corpus = default_corpus().unwrap();
    let mut best = (f64::INFINITY, String::new());
    for e in corpus.of(Theorem::Iso) {
        let r = isoperimetric_report(&e.domain.polygon().unwrap()).unwrap();
        assert!(r.deficit >= 0.0, "{}", e.name);
        if r.deficit < best.0 {
            best = (r.deficit, e.name.clone());
        }
        if e.name.starts_with("iso_rect") || e.name.starts_with("iso_lshape") {
            assert!(r.deficit > 0.1, "{}", e.name);
        }
    }
    assert!(best.0 < 1e-3, "{best:?}");
    assert!(best.1.starts_with("iso_ngon"));
}

#[test]
fn wulff_quotients_for_l1_and_linf() {
    let l1 = Gauge::l1(512).unwrap();
    let sq = wulff_report(&Polygon::rectangle(-1.0, -1.0, 2.0, 2.0).unwrap(), &l1).unwrap();
    assert!(sq.deficit.abs() < 1e-6, "{}", sq.deficit);
    // P_{ℓ¹}(B_1) = ∫ |cos θ| + |sin θ| dθ = 8 and P_H(W)/|W|^{1/2} = 8/2
    let disc = wulff_report(&Polygon::regular_ngon(512, 1.0).unwrap(), &l1).unwrap();
    assert!((disc.quotient - 8.0 / PI.sqrt()).abs() < 1e-4, "{}", disc.quotient);
    assert!((disc.reference - 4.0).abs() < 1e-6);
    let linf = Gauge::linf(512).unwrap();
    let diamond = Polygon::regular_ngon(4, 1.0).unwrap();
    assert!(wulff_report(&diamond, &linf).unwrap().deficit.abs() < 1e-6);
    assert!(wulff_report(&Polygon::unit_square(), &linf).unwrap().deficit > 0.1);
}

#[test]
fn cone_quotients_of_quarter_disc_and_unit_square() {
    let q = ConvexCone::quadrant();
    let e = Gauge::euclidean();
    let quarter = Polygon::sector(1.0, 0.0, PI / 2.0, 512).unwrap();
    for w in [HomogeneousWeight::constant(), xy(), HomogeneousWeight::monomial(1.5, 0.5).unwrap()] {
        assert!(cone_report(&quarter, &q, &w, &e).unwrap().deficit.abs() < 1e-3);
    }
    // unit square with w = xy: P = 1/2 + 1/2 on the free sides, w(Ω) = 1/4, D = 4
    let r = cone_report(&Polygon::unit_square(), &q, &xy(), &e).unwrap();
    let quotient = 1.0 / 0.25f64.powf(0.75);
    let reference = 0.5 / 0.125f64.powf(0.75);
    assert!((r.quotient - quotient).abs() < 1e-4, "{}", r.quotient);
    assert!((r.reference - reference).abs() < 1e-6);
    assert!((r.deficit - (quotient - reference)).abs() < 1e-4);
}

#[test]
fn half_disc_is_optimal_in_the_half_plane() {
    let h = ConvexCone::upper_half_plane();
    let half = Polygon::sector(1.0, 0.0, PI, 512).unwrap();
    let r = cone_report(&half, &h, &HomogeneousWeight::constant(), &Gauge::euclidean()).unwrap();
    assert!(r.deficit.abs() < 1e-3, "{}", r.deficit);
    assert!((r.reference - PI / (PI / 2.0).sqrt()).abs() < 1e-9);
}

#[test]
fn quotients_are_scale_invariant() {
    let q = ConvexCone::quadrant();
    let poly = Polygon::annular_sector(0.3, 1.0, 0.1, 1.2, 48).unwrap();
    let base = cone_report(&poly, &q, &xy(), &Gauge::l1(256).unwrap()).unwrap();
    for t in [0.5, 2.0, 7.0] {
        let r = cone_report(&poly.scaled(t).unwrap(), &q, &xy(), &Gauge::l1(256).unwrap()).unwrap();
        assert!((r.quotient - base.quotient).abs() < 1e-6 * base.quotient, "t = {t}");
    }
}

#[test]
fn cone_report_reduces_to_classical_and_wulff() {
    let one = HomogeneousWeight::constant();
    let full = ConvexCone::FullPlane;
    for poly in [Polygon::l_shape(1.0, 0.3).unwrap(), Polygon::ellipse(1.0, 0.4, 64).unwrap()] {
        let a = cone_report(&poly, &full, &one, &Gauge::euclidean()).unwrap();
        let b = isoperimetric_report(&poly).unwrap();
        assert!((a.quotient - b.quotient).abs() < 1e-12 && (a.reference - b.reference).abs() < 1e-12);
        let l1 = Gauge::l1(512).unwrap();
        let c = cone_report(&poly, &full, &one, &l1).unwrap();
        let d = wulff_report(&poly, &l1).unwrap();
        assert!((c.quotient - d.quotient).abs() < 1e-12 && (c.reference - d.reference).abs() < 1e-12);
    }
}

#[test]
fn non_concave_weight_is_rejected() {
    let r2 = HomogeneousWeight::radial_power(2.0, ConvexCone::quadrant()).unwrap();
    let res = cone_report(&Polygon::unit_square(), &ConvexCone::quadrant(), &r2, &Gauge::euclidean());
    assert!(matches!(res, Err(Error::Hypothesis(_))));
}

#[test]
fn weighted_wulff_identity() {
    let q = ConvexCone::quadrant();
    for w in [xy(), HomogeneousWeight::monomial(1.5, 0.5).unwrap()] {
        for h in [Gauge::euclidean(), Gauge::l1(512).unwrap(), Gauge::linf(512).unwrap()] {
            assert!(wulff_identity_check(&h, &q, &w).unwrap().passed());
        }
    }
    let res = wulff_identity_check(&Gauge::euclidean(), &q, &HomogeneousWeight::constant());
    assert!(matches!(res, Err(Error::Hypothesis(_))));
}

#[test]
fn every_corpus_entry_satisfies_its_inequality() {
    let corpus = default_corpus().unwrap();
    assert_eq!(Corpus::from_json(&corpus.to_json()).unwrap(), corpus);
    let reports = corpus_reports(&corpus);
    assert_eq!(reports.len(), corpus.entries.len());
    for (name, r) in reports {
        let r = r.unwrap();
        assert!(r.holds(), "{name}: {}", r.deficit);
    }
}

#[test]
fn sobolev_bumps_respect_the_isoperimetric_constant() {
    let q = ConvexCone::quadrant();
    let one = HomogeneousWeight::constant();
    let rep = sobolev_check(&one, &q, 1.0, &seeded_bumps(&q, 1.0, 10, 3), 3).unwrap();
    // w ≡ 1 on the quadrant: C₁ = 1/(2 (π/4)^{1/2})
    let c1 = 1.0 / (2.0 * (PI / 4.0).sqrt());
    assert!((rep.c1.unwrap() - c1).abs() < 1e-9);
    assert!(rep.pass() && rep.max_quotient < c1);
    assert!(rep.certificate().passed());
    assert!(matches!(sobolev_check(&xy(), &q, 4.0, &[], 3), Err(Error::Exponent(_))));
}

#[test]
fn sobolev_quotient_is_dilation_invariant() {
    let q = ConvexCone::quadrant();
    let u = TestFunction::Bump { center: Vec2::new(0.4, 0.3), radius: 0.5, power: 3.0 };
    for p in [1.0, 2.0] {
        let base = sobolev_quotient(&u, &xy(), &q, p).unwrap();
        for t in [0.25, 3.0] {
            let v = sobolev_quotient(&u.dilated(t), &xy(), &q, p).unwrap();
            assert!((v - base).abs() < 1e-6 * base, "p = {p}, t = {t}");
        }
    }
}

#[test]
fn mollified_indicator_approaches_the_constant() {
    let q = ConvexCone::quadrant();
    let fam: Vec<TestFunction> =
        [0.2, 0.05, 0.01].iter().map(|&width| TestFunction::RadialRamp { radius: 1.0, width }).collect();
    let rep = sobolev_check(&xy(), &q, 1.0, &fam, DEFAULT_SEED).unwrap();
    let c1 = rep.c1.unwrap();
    assert!(rep.quotients.windows(2).all(|w| w[0] < w[1]), "{:?}", rep.quotients);
    assert!(rep.quotients[2] > 0.98 * c1 && rep.violations == 0);
}

#[test]
fn faber_krahn_ordering() {
    let ratio = |p: Polygon| faber_krahn_report(&p, &cfg(0.03)).unwrap().0.ratio;
    let disc = ratio(Polygon::regular_ngon(256, 1.0).unwrap());
    let square = ratio(Polygon::unit_square());
    let long = ratio(Polygon::rectangle(0.0, 0.0, 3.0, 1.0).unwrap());
    let j = abp_core::special::j0_first_zero();
    assert!((disc - 1.0).abs() < 0.01);
    assert!((square - 2.0 * PI * PI / (PI * j * j)).abs() < 0.01);
    assert!(disc < square && square < long);
}

#[test]
fn eigen_trace_of_square_passes() {
    let t = eigen_trace(&Polygon::unit_square(), &SolverConfig::default()).unwrap();
    assert!(t.certificate.passed(), "{}", t.certificate.to_json());
    let names: Vec<&str> = t.certificate.links.iter().map(|l| l.name.as_str()).collect();
    assert_eq!(names, ["faber_krahn", "log_residual", "area_formula", "lower_integral"]);
}

#[test]
fn classical_trace_of_square() {
    let cert = abp_trace(&TraceSpec::classical(Polygon::unit_square()));
    assert!(cert.passed(), "{}", cert.to_json());
    let names: Vec<&str> = cert.links.iter().map(|l| l.name.as_str()).collect();
    assert_eq!(names, ["compatibility", "gradient_coverage", "area_formula", "amgm", "contact_bound", "isoperimetric"]);
    let iso = cert.link("isoperimetric").unwrap();
    assert_eq!(iso.rhs, 4.0);
}

#[test]
fn weighted_trace_of_quarter_annulus() {
    let mut spec = TraceSpec::classical(Polygon::annular_sector(0.5, 1.0, 0.0, PI / 2.0, 64).unwrap());
    spec.cone = ConvexCone::quadrant();
    spec.weight = xy();
    let full = abp_trace_full(&spec);
    let cert = &full.certificate;
    assert!(cert.passed(), "{}", cert.to_json());
    assert_eq!(cert.links.len(), 8);
    assert_eq!(cert.links[0].name, "concavity");
    let run = full.run_domain.unwrap();
    assert!(run.vertices().iter().all(|&v| spec.cone.boundary_distance(v) > 0.0));
}

#[test]
fn wulff_trace_and_non_concave_halt() {
    let mut spec = TraceSpec::classical(Polygon::rectangle(-1.0, -1.0, 2.0, 2.0).unwrap());
    spec.gauge = Gauge::l1(512).unwrap();
    spec.solver.h = 0.04;
    let cert = abp_trace(&spec);
    assert!(cert.passed(), "{}", cert.to_json());
    assert_eq!(cert.links[0].name, "gauge");

    let mut spec = TraceSpec::classical(Polygon::unit_square());
    spec.cone = ConvexCone::quadrant();
    spec.weight = HomogeneousWeight::radial_power(2.0, ConvexCone::quadrant()).unwrap();
    let cert = abp_trace(&spec);
    assert!(!cert.passed());
    assert_eq!(cert.links.len(), 1);
    assert!(cert.halted.as_deref().unwrap().contains("not concave"));
}
