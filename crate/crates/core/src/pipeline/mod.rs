//! Batch verification: every record of a dataset goes through coset
//! enumeration, Knuth-Bendix completion, abelianisation, the 2-quotient
//! and the multiplier test, and the answers are cross-checked against each
//! other and against an optional file of expected properties.

mod dataset;
mod report;

pub use dataset::{parse_dataset, DatasetError, Expectations, Record};
pub use report::{emit_report, write_report, ReportFormat, TSV_COLUMNS};

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abelian::{abelian_invariants, minimal_generators_mod_p};
use crate::coset::{enumerate_group, EnumerationLimits, Strategy};
use crate::multiplier::multiplier_of_pc;
use crate::pquotient::{p_quotient, PqResult};
use crate::presentation::Presentation;
use crate::rewriting::{complete, CompletionLimits, CompletionStatus, NormalFormCount};

/// The prime of the lower exponent-p central series used throughout.
const PRIME: u64 = 2;

/// An integer that serializes as a JSON number when it fits in 64 bits and
/// as a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Int(pub BigInt);

impl From<u64> for Int {
    fn from(n: u64) -> Self {
        Int(BigInt::from(n))
    }
}

impl From<BigUint> for Int {
    fn from(n: BigUint) -> Self {
        Int(BigInt::from(n))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawValue {
    Number(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawValue::deserialize(d)? {
            RawValue::Number(n) => Ok(Int(BigInt::from(n))),
            RawValue::Text(t) => t.parse().map(Int).map_err(serde::de::Error::custom),
        }
    }
}

/// Outcome of a stage that computes a group order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageOrder {
    Known(Int),
    /// A resource limit was hit.
    Exceeded,
    /// The stage was switched off.
    Skipped,
    /// The p-quotient stopped at its class limit.
    Incomplete,
    /// The stage returned an error, recorded in the report's problems.
    Failed,
}

impl StageOrder {
    pub fn known(&self) -> Option<&Int> {
        match self {
            StageOrder::Known(n) => Some(n),
            _ => None,
        }
    }

    fn keyword(&self) -> &'static str {
        match self {
            StageOrder::Known(_) => "known",
            StageOrder::Exceeded => "exceeded",
            StageOrder::Skipped => "skipped",
            StageOrder::Incomplete => "incomplete",
            StageOrder::Failed => "failed",
        }
    }
}

impl fmt::Display for StageOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageOrder::Known(n) => n.fmt(f),
            other => f.write_str(other.keyword()),
        }
    }
}

impl FromStr for StageOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "exceeded" => StageOrder::Exceeded,
            "skipped" => StageOrder::Skipped,
            "incomplete" => StageOrder::Incomplete,
            "failed" => StageOrder::Failed,
            _ => StageOrder::Known(Int(s
                .parse()
                .map_err(|_| format!("bad stage value {s:?}"))?)),
        })
    }
}

impl Serialize for StageOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            StageOrder::Known(n) => n.serialize(s),
            other => s.serialize_str(other.keyword()),
        }
    }
}

impl<'de> Deserialize<'de> for StageOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawValue::deserialize(d)? {
            RawValue::Number(n) => Ok(StageOrder::Known(Int(BigInt::from(n)))),
            RawValue::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Partial,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Partial => "PARTIAL",
        })
    }
}

/// Wall-clock milliseconds per stage.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub tc_ms: u64,
    pub kb_ms: u64,
    pub abelian_ms: u64,
    pub pq_ms: u64,
    pub multiplier_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub id: String,
    pub provenance: String,
    pub balanced: bool,
    pub order_tc: StageOrder,
    pub order_kb: StageOrder,
    pub order_pq: StageOrder,
    pub exponent_p_class: Option<usize>,
    pub series_orders: Vec<Int>,
    pub abelian_invariants: Vec<Int>,
    pub d_mod_2: usize,
    pub multiplier_trivial: Option<bool>,
    pub multiplicator_rank: Option<usize>,
    pub timings: Timings,
    pub verdict: Verdict,
    /// Why the verdict is not PASS, one entry per failed or unfinished check.
    pub problems: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub enumeration: EnumerationLimits,
    pub completion: CompletionLimits,
    /// Largest number of normal forms counted after a successful completion.
    pub normal_form_bound: u64,
    pub max_class: usize,
    pub skip_kb: bool,
    pub skip_multiplier: bool,
    /// Worker threads; 0 uses every available core.
    pub jobs: usize,
    pub expectations: Option<Expectations>,
    /// Where `run_dataset` writes the report, if anywhere.
    pub report: Option<(PathBuf, ReportFormat)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            enumeration: EnumerationLimits::default(),
            completion: CompletionLimits::default(),
            normal_form_bound: 10_000_000,
            max_class: 64,
            skip_kb: false,
            skip_multiplier: false,
            jobs: 0,
            expectations: None,
            report: None,
        }
    }
}

impl RunConfig {
    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.enumeration.strategy = strategy;
        self
    }
}

/// A record that could not be verified at all.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordError {
    pub line: usize,
    pub id: Option<String>,
    pub message: String,
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.id {
            Some(id) => write!(f, "line {} (id {id}): {}", self.line, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub partial: usize,
    pub errors: usize,
}

impl Summary {
    pub fn of(reports: &[GroupReport], errors: usize) -> Self {
        let count = |v| reports.iter().filter(|r| r.verdict == v).count();
        Summary {
            pass: count(Verdict::Pass),
            fail: count(Verdict::Fail),
            partial: count(Verdict::Partial),
            errors,
        }
    }

    /// No FAIL verdicts and no unverifiable records.
    pub fn success(&self) -> bool {
        self.fail == 0 && self.errors == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} PASS, {} PARTIAL, {} FAIL, {} errors",
            self.pass, self.partial, self.fail, self.errors
        )
    }
}

#[derive(Clone, Debug)]
pub struct DatasetRun {
    pub reports: Vec<GroupReport>,
    pub errors: Vec<RecordError>,
    pub summary: Summary,
}

#[derive(thiserror::Error, Debug)]
pub enum PipelineError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write report {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot build worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

fn millis(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Runs every enabled stage on one record and decides its verdict.
pub fn verify_group(record: &Record, cfg: &RunConfig) -> Result<GroupReport, RecordError> {
    let pres = Presentation::parse(&record.presentation).map_err(|e| RecordError {
        line: record.line,
        id: Some(record.id.clone()),
        message: e.to_string(),
    })?;
    let mut failures: Vec<String> = Vec::new();
    let mut partial: Vec<String> = Vec::new();
    let mut timings = Timings::default();

    let start = Instant::now();
    let order_tc = match enumerate_group(&pres, &cfg.enumeration) {
        Ok(t) if t.is_closed() => StageOrder::Known(Int::from(t.live_count() as u64)),
        Ok(_) => {
            failures.push("coset enumeration exceeded its limits".into());
            StageOrder::Exceeded
        }
        Err(e) => {
            failures.push(format!("coset enumeration: {e}"));
            StageOrder::Failed
        }
    };
    timings.tc_ms = millis(start);

    let start = Instant::now();
    let order_kb = if cfg.skip_kb {
        StageOrder::Skipped
    } else {
        let rs = complete(&pres, &cfg.completion);
        match rs.status() {
            CompletionStatus::Confluent => match rs.count_normal_forms(cfg.normal_form_bound) {
                Ok(NormalFormCount::Finite(n)) => StageOrder::Known(Int::from(n)),
                Ok(NormalFormCount::ExceedsBound(b)) => {
                    partial.push(format!("more than {b} normal forms"));
                    StageOrder::Exceeded
                }
                Err(e) => {
                    failures.push(format!("normal forms: {e}"));
                    StageOrder::Failed
                }
            },
            CompletionStatus::Exceeded(limit) => {
                partial.push(format!("completion stopped at its {limit:?} limit").to_lowercase());
                StageOrder::Exceeded
            }
            CompletionStatus::Unchecked => {
                failures.push("completion returned an unchecked system".into());
                StageOrder::Failed
            }
        }
    };
    timings.kb_ms = millis(start);

    let start = Instant::now();
    let abelian: Vec<Int> = abelian_invariants(&pres).into_iter().map(Int).collect();
    let d_mod_2 = minimal_generators_mod_p(&pres, PRIME).expect("2 is prime");
    timings.abelian_ms = millis(start);

    let start = Instant::now();
    let pq: Option<PqResult> = match p_quotient(&pres, PRIME, cfg.max_class) {
        Ok(r) => Some(r),
        Err(e) => {
            failures.push(format!("p-quotient: {e}"));
            None
        }
    };
    timings.pq_ms = millis(start);
    let order_pq = match &pq {
        Some(r) if r.complete => StageOrder::Known(Int::from(r.order())),
        Some(r) => {
            failures.push(format!("p-quotient incomplete at class {}", r.class));
            StageOrder::Incomplete
        }
        None => StageOrder::Failed,
    };

    if let (Some(tc), Some(q)) = (order_tc.known(), order_pq.known()) {
        if tc != q {
            failures.push(format!(
                "order mismatch: coset enumeration {tc}, p-quotient {q}"
            ));
        }
    }
    if let (Some(tc), Some(kb)) = (order_tc.known(), order_kb.known()) {
        if tc != kb {
            failures.push(format!(
                "order mismatch: coset enumeration {tc}, rewriting {kb}"
            ));
        }
    }

    let start = Instant::now();
    let mut multiplier_trivial = None;
    let mut multiplicator_rank = None;
    let orders_agree = order_tc.known().is_some() && order_tc.known() == order_pq.known();
    if !cfg.skip_multiplier && orders_agree {
        match multiplier_of_pc(&pq.as_ref().expect("order known").pc) {
            Ok(v) => {
                multiplier_trivial = Some(v.trivial);
                multiplicator_rank = Some(v.multiplicator_rank);
            }
            Err(e) => failures.push(format!("multiplier: {e}")),
        }
    }
    timings.multiplier_ms = millis(start);

    let balanced = pres.is_balanced();
    if balanced && multiplier_trivial == Some(false) {
        failures.push("finite group with a balanced presentation has nontrivial multiplier".into());
    }

    if let Some(exp) = &cfg.expectations {
        if let (Some(want), Some(got)) = (&exp.order, order_tc.known()) {
            if got.0 != BigInt::from(want.clone()) {
                failures.push(format!("order {got}, expected {want}"));
            }
        }
        if let Some(want) = exp.d {
            if d_mod_2 != want {
                failures.push(format!("d = {d_mod_2}, expected {want}"));
            }
        }
        if let Some(want) = exp.multiplier_trivial {
            match multiplier_trivial {
                Some(got) if got != want => failures.push(format!(
                    "multiplier {}, expected {}",
                    if got { "trivial" } else { "nontrivial" },
                    if want { "trivial" } else { "nontrivial" }
                )),
                Some(_) => {}
                None if cfg.skip_multiplier => partial.push("multiplier not checked".into()),
                None => failures.push("multiplier not decided".into()),
            }
        }
        if let Some(want) = exp.balanced(&record.id) {
            if balanced != want {
                failures.push(format!("balanced = {balanced}, expected {want}"));
            }
        }
    }

    let verdict = if !failures.is_empty() {
        Verdict::Fail
    } else if !partial.is_empty() {
        Verdict::Partial
    } else {
        Verdict::Pass
    };
    failures.extend(partial);
    Ok(GroupReport {
        id: record.id.clone(),
        provenance: record.provenance.clone(),
        balanced,
        order_tc,
        order_kb,
        order_pq,
        exponent_p_class: pq.as_ref().filter(|r| r.complete).map(|r| r.class),
        series_orders: pq
            .as_ref()
            .map(|r| r.series_orders().into_iter().map(Int::from).collect())
            .unwrap_or_default(),
        abelian_invariants: abelian,
        d_mod_2,
        multiplier_trivial,
        multiplicator_rank,
        timings,
        verdict,
        problems: failures,
    })
}

/// Verifies records in parallel; reports come back in record order.
pub fn verify_records(
    records: &[Record],
    cfg: &RunConfig,
) -> Result<Vec<Result<GroupReport, RecordError>>, PipelineError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| PipelineError::Pool(e.to_string()))?;
    Ok(pool.install(|| records.par_iter().map(|r| verify_group(r, cfg)).collect()))
}

/// Verifies every record of the dataset at `path`, writing the report if
/// `cfg.report` asks for one.
pub fn run_dataset(path: &Path, cfg: &RunConfig) -> Result<DatasetRun, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|source| PipelineError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let (records, parse_errors) = parse_dataset(&text);
    let mut errors: Vec<RecordError> = parse_errors
        .into_iter()
        .map(|e| match e {
            DatasetError::Syntax { line, msg } => RecordError {
                line,
                id: None,
                message: msg,
            },
            DatasetError::DuplicateId { line, id } => RecordError {
                line,
                message: format!("duplicate id {id:?}"),
                id: Some(id),
            },
        })
        .collect();
    let mut reports = Vec::new();
    for outcome in verify_records(&records, cfg)? {
        match outcome {
            Ok(r) => reports.push(r),
            Err(e) => errors.push(e),
        }
    }
    errors.sort_by_key(|e| e.line);
    if let Some((out, format)) = &cfg.report {
        write_report(&reports, *format, out).map_err(|source| PipelineError::Write {
            path: out.clone(),
            source,
        })?;
    }
    let summary = Summary::of(&reports, errors.len());
    Ok(DatasetRun {
        reports,
        errors,
        summary,
    })
}
