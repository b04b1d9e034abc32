//! Quotient reports, Sobolev checks and end-to-end proof traces.

mod corpus;
mod faber_krahn;
mod quotient;
mod sobolev;
mod trace;

pub use corpus::{
    corpus_reports, default_corpus, entry_report, entry_trace, random_hull, Corpus, CorpusEntry, Theorem,
};
pub use faber_krahn::{eigen_trace, faber_krahn_report, EigenTrace, FaberKrahnReport, FABER_KRAHN_SLACK};
pub use quotient::{
    ball_sector_reference, cone_report, isoperimetric_report, polygon_weighted_measure, wulff_identity_check,
    wulff_reference, wulff_report, QuotientReport, CONCAVITY_SAMPLES, DEFICIT_TOL, IDENTITY_TOL, WULFF_DIRECTIONS,
};
pub use sobolev::{seeded_bumps, sobolev_check, sobolev_quotient, SobolevReport, TestFunction, SOBOLEV_CELLS};
pub use trace::{abp_trace, abp_trace_full, TraceArtifacts, TraceSlack, TraceSpec};
