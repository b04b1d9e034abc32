use std::sync::Arc;

use serde::Serialize;

use crate::abp::{
    eigen_chain_check, log_eigen_transform, Certificate, LogTransformSummary, CHAIN_CLIP, CHAIN_SLACK, DEFAULT_CLIP,
    RESIDUAL_TOL,
};
use crate::geometry::{triangulate, Polygon};
use crate::pde::{principal_eigen_fem, EigenResult, EigenSummary, SolverConfig};
use crate::special::j0_first_zero;
use crate::Result;

/// Relative slack of `λ₁|Ω| ≥ π j₀,₁²`.
pub const FABER_KRAHN_SLACK: f64 = 0.01;

#[derive(Debug, Clone, Serialize)]
pub struct FaberKrahnReport {
    pub lambda: f64,
    pub area: f64,
    pub lambda_area: f64,
    /// `π j₀,₁²`.
    pub ball_value: f64,
    pub ratio: f64,
    pub eigen: EigenSummary,
}

/// `λ₁(Ω)|Ω|` for the Dirichlet Laplacian against the disc value, with the
/// eigenpair for further use.
pub fn faber_krahn_report(poly: &Polygon, cfg: &SolverConfig) -> Result<(FaberKrahnReport, EigenResult)> {
    let mesh = Arc::new(triangulate(poly, cfg.h)?);
    let eig = principal_eigen_fem(mesh, cfg)?;
    let j = j0_first_zero();
    let ball_value = std::f64::consts::PI * j * j;
    let area = poly.area();
    let report = FaberKrahnReport {
        lambda: eig.lambda,
        area,
        lambda_area: eig.lambda * area,
        ball_value,
        ratio: eig.lambda * area / ball_value,
        eigen: eig.summary(),
    };
    Ok((report, eig))
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenTrace {
    pub faber_krahn: FaberKrahnReport,
    /// Log transform on the [`DEFAULT_CLIP`] region.
    pub log_transform: LogTransformSummary,
    pub chain_clip: f64,
    #[serde(skip)]
    pub certificate: Certificate,
}

/// Principal eigenpair, Faber–Krahn comparison, log-transform residual and
/// the integral chain on the [`CHAIN_CLIP`] region, in one certificate.
pub fn eigen_trace(poly: &Polygon, cfg: &SolverConfig) -> Result<EigenTrace> {
    let (fk, eig) = faber_krahn_report(poly, cfg)?;
    let lt = log_eigen_transform(&eig, DEFAULT_CLIP)?;
    let mut cert = Certificate::new("eigenvalue lower bound");
    cert.push("faber_krahn", fk.ball_value, fk.lambda_area, FABER_KRAHN_SLACK * fk.ball_value);
    cert.push("log_residual", lt.residual, 0.0, RESIDUAL_TOL);
    cert.meta("h", cfg.h);
    let chain = log_eigen_transform(&eig, CHAIN_CLIP).and_then(|t| eigen_chain_check(&t.field, eig.lambda, fk.area, 0.0, CHAIN_SLACK));
    match chain {
        Ok(c) => {
            for l in c.links {
                cert.push(l.name, l.lhs, l.rhs, l.slack);
            }
            for (k, v) in c.metadata {
                cert.meta(&k, v);
            }
        }
        Err(e) => cert.halt(e.to_string()),
    }
    Ok(EigenTrace { faber_krahn: fk, log_transform: lt.summary(), chain_clip: CHAIN_CLIP, certificate: cert })
}
