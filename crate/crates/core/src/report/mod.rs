//! Sweep configuration, execution and report emission.

mod config;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{
    AllWord, CaseSpec, Format, Job, Numerators, OneOrMany, Samples, SweepConfig, DEFAULT_PRECISION,
    DEFAULT_SAMPLES,
};

use crate::error::{Error, Result};
use crate::finite_field::run_finite_case;
use crate::record::CaseRecord;
use crate::transform::{run_case, Sampling};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The default verification grid.
pub const BUNDLED_CONFIG: &str = include_str!("../../configs/acceptance.toml");

/// Environment variable that redirects relative report paths.
pub const OUTPUT_DIR_ENV: &str = "DWORK_HG_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: bool,
    pub cases: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: String,
    pub config: SweepConfig,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(config: SweepConfig, cases: Vec<CaseRecord>) -> Self {
        let summary = Summary {
            pass: cases.iter().all(|c| c.pass),
            cases: cases.len(),
        };
        Self {
            version: VERSION.to_string(),
            config,
            cases,
            summary,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("report: {e}")))
    }
}

/// Runs every case of the config on the current rayon pool. The record order
/// is the config's expansion order whatever the scheduling.
pub fn run(config: &SweepConfig) -> Result<ReportDocument> {
    let jobs = config.jobs()?;
    let seed = config.seed;
    let cases: Vec<CaseRecord> = jobs
        .par_iter()
        .map(|job| match job {
            Job::Transform(case) => {
                let mut case = case.clone();
                case.sampling
                    .get_or_insert(Sampling::Random(DEFAULT_SAMPLES));
                run_case(&case, seed)
            }
            Job::Finite(case) => run_finite_case(case, seed),
        })
        .collect();
    Ok(ReportDocument::new(config.clone(), cases))
}

pub fn emit(doc: &ReportDocument, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => emit_json(doc),
        Format::Csv => emit_csv(doc),
    }
}

pub fn emit_json(doc: &ReportDocument) -> Result<Vec<u8>> {
    let mut out =
        serde_json::to_vec_pretty(doc).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub const CSV_COLUMNS: [&str; 13] = [
    "case_id",
    "kind",
    "p",
    "N",
    "r",
    "d",
    "f",
    "n",
    "point",
    "lhs",
    "rhs",
    "match",
    "skipped_reason",
];

/// One row per checked point and one per skipped point; a case with neither
/// still gets a row with an empty point.
pub fn emit_csv(doc: &ReportDocument) -> Result<Vec<u8>> {
    fn opt<T: ToString>(x: Option<T>) -> String {
        x.map(|v| v.to_string()).unwrap_or_default()
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::InvalidParameter(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(err)?;
    for case in &doc.cases {
        let head = [
            case.id.clone(),
            case.kind.to_string(),
            opt(case.p),
            opt(case.big_n),
            opt(case.r),
            opt(case.d),
            opt(case.f),
            opt(case.n),
        ];
        let mut rows: Vec<[String; 5]> = case
            .points
            .iter()
            .map(|pt| {
                [
                    pt.point.clone(),
                    pt.lhs.clone(),
                    pt.rhs.clone(),
                    pt.matched.to_string(),
                    String::new(),
                ]
            })
            .collect();
        rows.extend(case.skipped.iter().map(|s| {
            [
                s.point.clone(),
                String::new(),
                String::new(),
                String::new(),
                s.reason.clone(),
            ]
        }));
        if rows.is_empty() {
            rows.push(Default::default());
        }
        for tail in rows {
            w.write_record(head.iter().chain(tail.iter()))
                .map_err(err)?;
        }
    }
    w.into_inner()
        .map_err(|e| Error::InvalidParameter(e.to_string()))
}
