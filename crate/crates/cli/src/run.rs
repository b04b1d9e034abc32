use std::fs;
use std::path::{Path, PathBuf};

use abp_core::abp::{abp_dirichlet_ratio, Certificate};
use abp_core::config::DomainSpec;
use abp_core::geometry::ConvexCone;
use abp_core::inequalities::{
    abp_trace_full, cone_report, default_corpus, eigen_trace, entry_report, entry_trace, isoperimetric_report,
    seeded_bumps, sobolev_check, wulff_report, Corpus, QuotientReport, TestFunction, TraceArtifacts, TraceSpec,
};
use abp_core::pde::{solve_dirichlet_fd, GridDomain, OperatorCoeffs, SolverConfig};
use abp_core::{report, Error, Gauge, HomogeneousWeight, Polygon};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{AbpArgs, Command, Common, CorpusArgs, SobolevArgs};
use crate::svg::Figure;

/// Why a run could not complete.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit code 2.
    Config(String),
    /// The pipeline itself failed: exit code 1.
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => Failure::Config(m),
            Error::Parameter(_) | Error::Exponent(_) => Failure::Config(e.to_string()),
            other => Failure::Run(other),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Run(_) => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let (kind, message) = match self {
            Failure::Config(m) => ("config", m.clone()),
            Failure::Run(e) => ("runtime", e.to_string()),
        };
        json!({"error": {"kind": kind, "message": message, "exit_code": self.exit_code()}}).to_string()
    }
}

type Outcome = Result<bool, Failure>;

/// Runs one command. `Ok(true)` when every certificate link passed.
pub fn execute(command: Command) -> Outcome {
    match command {
        Command::Iso(c) => quotient_command("iso", &c),
        Command::Wulff(c) => quotient_command("wulff", &c),
        Command::Cone(c) => quotient_command("cone", &c),
        Command::Eigen(c) => eigen_command(&c),
        Command::AbpEstimate(a) => abp_command(&a),
        Command::Sobolev(a) => sobolev_command(&a),
        Command::Corpus(a) => corpus_command(&a),
    }
}

struct Output<'a> {
    dir: &'a Path,
    prefix: String,
}

impl<'a> Output<'a> {
    fn new(common: &'a Common, prefix: &str) -> Result<Self, Failure> {
        fs::create_dir_all(&common.out)
            .map_err(|e| Failure::Config(format!("cannot create {}: {e}", common.out.display())))?;
        Ok(Output { dir: &common.out, prefix: prefix.to_string() })
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf, Failure> {
        let path = self.dir.join(format!("{}_{name}", self.prefix));
        fs::write(&path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok(path)
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn load_domain(common: &Common) -> Result<DomainSpec, Failure> {
    let path = common.domain.as_ref().ok_or_else(|| Failure::Config("--domain is required".into()))?;
    DomainSpec::from_json(&read_text(path)?).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

/// Report JSON with the run's seed and solver recorded.
fn report_json<T: Serialize>(value: &T, common: &Common, solver: &SolverConfig) -> String {
    let mut v = report::to_value(value);
    let run = report::to_value(&json!({"seed": common.seed, "h": solver.h, "samples": common.samples}));
    if let (Value::Object(obj), Value::Object(run)) = (&mut v, run) {
        let target = match obj.get_mut("metadata") {
            Some(Value::Object(meta)) => meta,
            _ => obj,
        };
        for (k, x) in run {
            target.entry(k).or_insert(x);
        }
    }
    serde_json::to_string_pretty(&v).unwrap_or_default()
}

fn r(x: f64) -> f64 {
    report::round_sig(x)
}

fn summarize(command: &str, cert: &Certificate) {
    let passed = cert.links.iter().filter(|l| l.pass).count();
    let status = if cert.passed() { "PASS" } else { "FAIL" };
    println!("{command}: certificate {status} ({passed}/{} links)", cert.links.len());
    if let Some(reason) = &cert.halted {
        println!("{command}: halted: {reason}");
    }
}

fn quotient_command(command: &str, common: &Common) -> Outcome {
    let spec = load_domain(common)?;
    let solver = common.solver(spec.solver());
    let mut poly = spec.polygon()?;
    let (cone, weight, gauge) = match command {
        "iso" => (ConvexCone::FullPlane, HomogeneousWeight::constant(), Gauge::euclidean()),
        "wulff" => (ConvexCone::FullPlane, HomogeneousWeight::constant(), spec.gauge()?),
        _ => (spec.cone()?, spec.weight()?, spec.gauge()?),
    };
    if !cone.is_full_plane() && poly.vertices().iter().any(|&v| !cone.contains_closed(v, 1e-12)) {
        poly = cone.clip(&poly)?;
    }
    let rep = match command {
        "iso" => isoperimetric_report(&poly),
        "wulff" => wulff_report(&poly, &gauge),
        _ => cone_report(&poly, &cone, &weight, &gauge),
    };
    if let Err(e @ (Error::Config(_) | Error::Parameter(_))) = rep {
        return Err(e.into());
    }

    let mut trace = TraceSpec::classical(poly.clone());
    trace.cone = cone;
    trace.weight = weight;
    trace.gauge = gauge;
    trace.solver = solver;
    trace.samples = common.samples;
    trace.seed = common.seed;
    let art = abp_trace_full(&trace);

    let out = Output::new(common, command)?;
    out.write("certificate.json", &art.certificate.to_json())?;
    if common.fig {
        trace_figures(&out, &poly, &cone, &art)?;
    }
    summarize(command, &art.certificate);
    let rep: QuotientReport = rep?.meta("command", command);
    out.write("report.json", &report_json(&rep, common, &solver))?;
    println!("{command}: quotient {} reference {} deficit {}", r(rep.quotient), r(rep.reference), r(rep.deficit));
    Ok(art.certificate.passed() && rep.holds())
}

fn cone_rays(fig: &mut Figure, cone: &ConvexCone, length: f64) {
    if let Some((a, b)) = cone.rays() {
        fig.segment(abp_core::Vec2::ZERO, a * length, "#888888");
        fig.segment(abp_core::Vec2::ZERO, b * length, "#888888");
    }
}

fn trace_figures(out: &Output, poly: &Polygon, cone: &ConvexCone, art: &TraceArtifacts) -> Result<(), Failure> {
    let reach = poly.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut fig = Figure::new(poly.vertices().iter().copied().chain(std::iter::once(abp_core::Vec2::ZERO)));
    cone_rays(&mut fig, cone, reach);
    fig.polygon(poly, "black", "#dde8f5");
    if let Some(run) = &art.run_domain {
        if run != poly {
            fig.polygon(run, "#c03030", "none");
        }
    }
    fig.title(&format!("domain, {} vertices", poly.len()));
    out.write("domain.svg", &fig.finish())?;

    if let (Some(sol), Some(gamma)) = (&art.solution, &art.contact) {
        let mesh = sol.field.mesh();
        let mut fig = Figure::new(mesh.vertices().iter().copied());
        fig.polygon(art.run_domain.as_ref().unwrap_or(poly), "black", "none");
        fig.points(mesh.vertices().iter().copied(), 0.8, "#c8c8c8");
        fig.points(gamma.members.iter().map(|&i| mesh.vertices()[i]), 1.2, "#1f5fbf");
        fig.title(&format!("contact set: {} of {} vertices", gamma.len(), mesh.num_vertices()));
        out.write("contact.svg", &fig.finish())?;

        if let Some(target) = &art.target {
            let mut fig = Figure::new(target.vertices().iter().copied().chain(gamma.gradients.iter().copied()));
            cone_rays(&mut fig, cone, 1.2);
            fig.polygon(target, "black", "#f3ecd8");
            fig.points(gamma.gradients.iter().copied(), 0.9, "#1f5fbf");
            fig.title("gradient image of the contact set over the target");
            out.write("gradient.svg", &fig.finish())?;
        }
    }
    Ok(())
}

fn domain_figure(out: &Output, poly: &Polygon, title: &str) -> Result<(), Failure> {
    let mut fig = Figure::new(poly.vertices().iter().copied());
    fig.polygon(poly, "black", "#dde8f5");
    fig.title(title);
    out.write("domain.svg", &fig.finish())?;
    Ok(())
}

fn eigen_command(common: &Common) -> Outcome {
    let spec = load_domain(common)?;
    let solver = common.solver(spec.solver());
    let poly = spec.polygon()?;
    let trace = eigen_trace(&poly, &solver)?;
    let mut cert = trace.certificate.clone();
    cert.meta("seed", common.seed);
    let out = Output::new(common, "eigen")?;
    out.write("report.json", &report_json(&trace, common, &solver))?;
    out.write("certificate.json", &cert.to_json())?;
    if common.fig {
        domain_figure(&out, &poly, &format!("lambda_1 = {:.6}", trace.faber_krahn.lambda))?;
    }
    summarize("eigen", &cert);
    println!("eigen: lambda_1 {} lambda_1|Omega| {}", r(trace.faber_krahn.lambda), r(trace.faber_krahn.lambda_area));
    Ok(cert.passed())
}

fn abp_command(args: &AbpArgs) -> Outcome {
    let common = &args.common;
    let spec = load_domain(common)?;
    let solver = common.solver(spec.solver());
    let poly = spec.polygon()?;
    let grid = std::sync::Arc::new(GridDomain::new(&poly, solver.h)?);
    let source = args.source;
    let f = move |_: abp_core::Vec2| source;
    let u = solve_dirichlet_fd(grid, &OperatorCoeffs::laplacian(), &f, &solver)?;
    let rep = abp_dirichlet_ratio(&u, &f, common.samples, common.seed)?;
    let cert = rep.certificate(true);
    let out = Output::new(common, "abp")?;
    let body = json!({"dirichlet": rep, "source": source});
    out.write("report.json", &report_json(&body, common, &solver))?;
    out.write("certificate.json", &cert.to_json())?;
    if common.fig {
        domain_figure(&out, &poly, &format!("sup u = {:.6}", rep.sup_u))?;
    }
    summarize("abp-estimate", &cert);
    println!("abp-estimate: ratio {} coverage {}", r(rep.ratio), r(rep.coverage));
    Ok(cert.passed())
}

fn sobolev_command(args: &SobolevArgs) -> Outcome {
    let common = &args.common;
    let spec = load_domain(common)?;
    let cone = spec.cone()?;
    let w = spec.weight()?;
    let mut family = seeded_bumps(&cone, args.radius, args.count, common.seed);
    family.push(TestFunction::RadialRamp { radius: args.radius, width: args.width });
    let rep = sobolev_check(&w, &cone, args.p, &family, common.seed)?;
    let cert = rep.certificate();
    let out = Output::new(common, "sobolev")?;
    let body = json!({"sobolev": rep, "family": family, "weight": w.label()});
    out.write("report.json", &report_json(&body, common, &spec.solver()))?;
    out.write("certificate.json", &cert.to_json())?;
    summarize("sobolev", &cert);
    println!("sobolev: max quotient {} constant {:?}", r(rep.max_quotient), rep.c1.map(r));
    Ok(cert.passed())
}

fn corpus_command(args: &CorpusArgs) -> Outcome {
    let common = &args.common;
    if let Some(path) = &args.write {
        let text = default_corpus()?.to_json();
        fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        return Ok(true);
    }
    let corpus = match &args.corpus {
        Some(p) => Corpus::from_json(&read_text(p)?).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?,
        None => default_corpus()?,
    };
    let out = Output::new(common, "corpus")?;
    let rows: Vec<Result<Value, Failure>> = corpus
        .entries
        .par_iter()
        .map(|e| {
            let solver = common.solver(e.domain.solver());
            let mut row = json!({"name": e.name, "theorem": e.theorem});
            let mut ok = true;
            match entry_report(e) {
                Ok(rep) => {
                    ok &= rep.holds();
                    row["deficit"] = json!(report::round_sig(rep.deficit));
                    out.write(&format!("{}.report.json", e.name), &report_json(&rep, common, &solver))?;
                }
                Err(err) => {
                    ok = false;
                    row["error"] = json!(err.to_string());
                }
            }
            if !args.no_trace {
                let cert = entry_trace(e, &solver, common.samples, common.seed)?;
                ok &= cert.passed();
                row["certificate_passed"] = json!(cert.passed());
                out.write(&format!("{}.certificate.json", e.name), &cert.to_json())?;
            }
            row["pass"] = json!(ok);
            Ok(row)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let passed = rows.iter().filter(|r| r["pass"] == json!(true)).count();
    let index = json!({"seed": common.seed, "entries": rows, "passed": passed, "total": corpus.entries.len()});
    out.write("index.json", &serde_json::to_string_pretty(&index).unwrap_or_default())?;
    println!("corpus: {passed}/{} entries pass", corpus.entries.len());
    Ok(passed == corpus.entries.len())
}
