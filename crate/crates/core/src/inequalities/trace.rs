use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::quotient::{cone_report, polygon_weighted_measure, wulff_reference, CONCAVITY_SAMPLES};
use crate::abp::{
    amgm_check, contact_integral, free_boundary_hops, gradient_coverage, lower_contact_set, Certificate, ContactSet, CoverageReport,
    Integrand, WeightedContext, AMGM_TOL, INTERIOR_HOPS,
};
use crate::geometry::{gauge_check, perimeter_weighted, triangulate, wulff_shape, ConvexCone, Gauge, Polygon, Vec2, GAUGE_CHECK_TOL};
use crate::pde::{solve_neumann, Flux, NeumannSolution, SolverConfig};
use crate::weights::{concavity_check, HomogeneousWeight, CONCAVITY_TOL};
use crate::{Error, Result, DEFAULT_SEED};

/// Declared slack of every link of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceSlack {
    /// Relative mismatch of `b_Ω` against `P/w(Ω)`.
    pub compatibility: f64,
    /// Tolerated fraction of non-interior Legendre argmins.
    pub coverage: f64,
    /// Relative slack of `w(W∩Σ) ≤ ∫_Γ w(∇u) det D²u`.
    pub area_formula: f64,
    /// Relative slack of the weighted pointwise AM-GM bound.
    pub amgm: f64,
    /// Relative slack of `∫_Γ w(∇u) det D²u ≤ (b_Ω/D)^D w(Ω)`.
    pub contact_bound: f64,
    /// Absolute slack of the final quotient comparison.
    pub quotient: f64,
}

impl Default for TraceSlack {
    fn default() -> Self {
        TraceSlack {
            compatibility: 1e-4,
            coverage: 0.02,
            area_formula: 0.02,
            amgm: 0.10,
            contact_bound: 0.02,
            quotient: 1e-3,
        }
    }
}

/// Input of [`abp_trace`]. The domain must already lie in the closed cone.
#[derive(Debug, Clone)]
pub struct TraceSpec {
    pub domain: Polygon,
    pub cone: ConvexCone,
    pub weight: HomogeneousWeight,
    pub gauge: Gauge,
    pub solver: SolverConfig,
    pub samples: usize,
    /// Coverage samples `p` from `(1-δ)·(W∩Σ)`.
    pub delta: f64,
    pub seed: u64,
    pub slack: TraceSlack,
}

impl TraceSpec {
    /// Classical setting: full plane, `w ≡ 1`, Euclidean gauge.
    pub fn classical(domain: Polygon) -> Self {
        TraceSpec {
            domain,
            cone: ConvexCone::FullPlane,
            weight: HomogeneousWeight::constant(),
            gauge: Gauge::euclidean(),
            solver: SolverConfig::default(),
            samples: 2000,
            delta: 0.05,
            seed: DEFAULT_SEED,
            slack: TraceSlack::default(),
        }
    }

    pub fn theorem(&self) -> &'static str {
        if !self.cone.is_full_plane() || !self.weight.is_constant() {
            "weighted cone isoperimetric"
        } else if !self.gauge.is_euclidean() {
            "wulff isoperimetric"
        } else {
            "classical isoperimetric"
        }
    }
}

/// Everything a trace computed, for figures and inspection.
#[derive(Debug, Clone)]
pub struct TraceArtifacts {
    pub certificate: Certificate,
    /// Domain actually meshed: translated into the cone when `w` vanishes on `∂Σ`.
    pub run_domain: Option<Polygon>,
    pub solution: Option<NeumannSolution>,
    pub contact: Option<ContactSet>,
    pub coverage: Option<CoverageReport>,
    /// Target set of the gradient map, `W ∩ Σ`.
    pub target: Option<Polygon>,
}

/// Runs the ABP proof of the selected isoperimetric theorem on `spec` and
/// certifies each step. Errors halt the trace with a partial certificate.
pub fn abp_trace(spec: &TraceSpec) -> Certificate {
    abp_trace_full(spec).certificate
}

pub fn abp_trace_full(spec: &TraceSpec) -> TraceArtifacts {
    let mut out = TraceArtifacts {
        certificate: Certificate::new(spec.theorem()),
        run_domain: None,
        solution: None,
        contact: None,
        coverage: None,
        target: None,
    };
    if let Err(e) = run(spec, &mut out) {
        out.certificate.halt(e.to_string());
    }
    out
}

fn boundary_tol(poly: &Polygon) -> f64 {
    1e-9 * poly.diameter().max(1.0)
}

fn run(spec: &TraceSpec, out: &mut TraceArtifacts) -> Result<()> {
    let cone = spec.cone;
    let w = spec.weight.clone().with_cone(cone);
    let h = spec.gauge.clone();
    let slack = spec.slack;
    let alpha = w.degree();
    let d = 2.0 + alpha;
    {
        let c = &mut out.certificate;
        c.meta("h", spec.solver.h);
        c.meta("seed", spec.seed);
        c.meta("samples", spec.samples);
        c.meta("weight", w.label());
        c.meta("D", d);
        c.meta("domain_vertices", spec.domain.len());
    }

    if !w.is_constant() {
        let rep = concavity_check(&w, CONCAVITY_SAMPLES, spec.seed)?;
        let pass = out.certificate.push("concavity", rep.max_violation, 0.0, CONCAVITY_TOL);
        if !pass {
            return Err(Error::Hypothesis(format!(
                "w^(1/alpha) is not concave on the cone for w = {}; witness {:?}",
                w.label(),
                rep.witness
            )));
        }
    }
    if !h.is_euclidean() {
        let rep = gauge_check(&h);
        let pass = out.certificate.push(
            "gauge",
            rep.worst_sublinearity.max(rep.worst_negativity),
            0.0,
            GAUGE_CHECK_TOL,
        );
        if rep.degenerate {
            return Err(Error::DegenerateGauge("the gauge vanishes on some direction".into()));
        }
        if !pass {
            return Err(Error::Hypothesis("the gauge is not convex and positive".into()));
        }
    }

    // Either translate into the cone, or keep the cone boundary as a
    // zero-flux part of ∂Ω.
    let translate = !cone.is_full_plane() && w.vanishes_on_cone_boundary();
    let run_poly = if translate { cone.shrink_into(&spec.domain, spec.solver.shrink) } else { spec.domain.clone() };
    let mut mesh = triangulate(&run_poly, spec.solver.h)?;
    let flux = if cone.is_full_plane() || translate {
        if h.is_euclidean() {
            Flux::Unit
        } else {
            Flux::Gauge(h.clone())
        }
    } else {
        mesh.mark_cone_boundary(&cone);
        let tol = boundary_tol(&run_poly);
        let hh = h.clone();
        Flux::Function(Arc::new(move |x: Vec2, nu: Vec2| if cone.boundary_distance(x) <= tol { 0.0 } else { hh.eval(nu) }))
    };
    out.certificate.meta("translated_into_cone", translate);
    out.run_domain = Some(run_poly.clone());
    let mesh = Arc::new(mesh);
    out.certificate.meta("mesh_vertices", mesh.num_vertices());

    let sol = solve_neumann(mesh, &w, &flux, &spec.solver)?;
    let b = sol.b_omega;
    let per_run = perimeter_weighted(&run_poly, &cone, &h, &w)?;
    let meas_run = polygon_weighted_measure(&run_poly, &w)?;
    let b_geom = per_run / meas_run;
    out.certificate.push("compatibility", (b - b_geom).abs() / b_geom, 0.0, slack.compatibility);
    out.certificate.meta("b_omega", b);
    out.certificate.meta("neumann_iterations", sol.stats.iterations);

    let gamma = lower_contact_set(&sol.field, None);
    out.certificate.meta("contact_members", gamma.len());
    out.certificate.meta("contact_area_fraction", gamma.area_fraction());
    out.certificate.meta("contact_epsilon", gamma.epsilon);

    let target = if h.is_euclidean() {
        cone.clip(&Polygon::regular_ngon(512, 1.0)?)?
    } else {
        wulff_shape(&h, 512)?.clipped(&cone)?
    };
    let cov = gradient_coverage(&sol.field, &target, spec.delta, spec.samples, spec.seed);
    out.certificate.push("gradient_coverage", 1.0, cov.fraction, slack.coverage);
    out.certificate.meta("coverage_fraction", cov.fraction);

    let (_, target_measure) = wulff_reference(&h, &w, &cone)?;
    let integral = contact_integral(&gamma, &Integrand::WeightedDet(&w));
    out.certificate.push("area_formula", target_measure, integral, slack.area_formula * target_measure);

    let interior = gamma.restricted(&free_boundary_hops(sol.field.mesh()), INTERIOR_HOPS);
    let am = if alpha == 0.0 {
        let r = amgm_check(&sol.field, &interior, None);
        out.certificate.push("amgm", r.max_slack, 0.0, AMGM_TOL);
        r
    } else {
        let ctx = WeightedContext { weight: &w, b_omega: b, dimension: d };
        let r = amgm_check(&sol.field, &interior, Some(ctx));
        out.certificate.push("amgm", r.max_slack, 0.0, slack.amgm);
        r
    };
    out.certificate.meta("amgm_checked", am.checked);

    let bound = (b / d).powf(d) * sol.measure;
    out.certificate.push("contact_bound", integral, bound, slack.contact_bound * bound);

    if !w.is_constant() {
        let (pw, mw) = wulff_reference(&h, &w, &cone)?;
        out.certificate.push("wulff_identity", (pw - d * mw).abs() / (d * mw), 0.0, super::quotient::IDENTITY_TOL);
    }

    let rep = cone_report(&spec.domain, &cone, &w, &h)?;
    out.certificate.push("isoperimetric", rep.reference, rep.quotient, slack.quotient);
    out.certificate.meta("quotient", rep.quotient);
    out.certificate.meta("reference", rep.reference);
    out.certificate.meta("deficit", rep.deficit);

    out.solution = Some(sol);
    out.contact = Some(gamma);
    out.coverage = Some(cov);
    out.target = Some(target);
    Ok(())
}
