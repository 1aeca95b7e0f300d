//! Batch runs over instances × algorithms × seeds.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clawpack::analysis::certify_local_optimum;
use clawpack::instance::read_instance;
use clawpack::oracle::DEFAULT_ORACLE_MAX_N;
use clawpack::scalar::rational_serde;
use clawpack::search::solve;
use clawpack::{exact_mwis, format_rational, OracleOptions, Rational, RationalGraph};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::options::{Algo, GenSpec, SolveOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Path { path: PathBuf },
    Gen(GenSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub source: InstanceSource,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    #[default]
    Empty,
    /// The designated solution of a generated family.
    Family,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub start: Start,
    #[serde(flatten)]
    pub options: SolveOptions,
}

impl AlgoEntry {
    pub fn new(options: SolveOptions, start: Start) -> Self {
        AlgoEntry { name: None, start, options }
    }

    fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| match self.start {
            Start::Empty => self.options.label(),
            Start::Family => format!("{}@A", self.options.label()),
        })
    }
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_oracle_limit() -> usize {
    DEFAULT_ORACLE_MAX_N
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    #[serde(default)]
    pub instances: Vec<InstanceEntry>,
    #[serde(default)]
    pub algorithms: Vec<AlgoEntry>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Instances with more vertices get no oracle optimum.
    #[serde(default = "default_oracle_limit")]
    pub oracle_limit: usize,
}

impl SuiteConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut suite: SuiteConfig = serde_json::from_str(&text).context("parsing suite")?;
        let base = path.parent().unwrap_or(Path::new("."));
        for entry in &mut suite.instances {
            if let InstanceSource::Path { path } = &mut entry.source {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
        Ok(suite)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// No oracle optimum, or an algorithm the certificates do not cover.
    #[serde(rename = "n/a")]
    NotApplicable,
    #[serde(rename = "error")]
    Error,
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertStatus::Pass => "pass",
            CertStatus::Fail => "fail",
            CertStatus::NotApplicable => "n/a",
            CertStatus::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub algo: String,
    pub seed: u64,
    #[serde(with = "rational_serde::option")]
    pub final_w: Option<Rational>,
    #[serde(with = "rational_serde::option")]
    pub opt_w: Option<Rational>,
    /// `opt_w / final_w`.
    #[serde(with = "rational_serde::option")]
    pub ratio: Option<Rational>,
    pub iters: Option<usize>,
    /// Only filled in when timing is requested.
    pub time_ms: Option<u64>,
    pub cert: CertStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// True iff no row errored and no certificate failed.
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none() && r.cert != CertStatus::Fail)
    }
}

struct Prepared {
    label: String,
    graph: RationalGraph,
    start: Option<Vec<usize>>,
    optimum: Option<(Rational, Vec<usize>)>,
}

fn prepare(entry: &InstanceEntry, oracle_limit: usize) -> Result<Prepared> {
    let (label, instance, start) = match &entry.source {
        InstanceSource::Path { path } => {
            let label = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into());
            (label, read_instance(path).with_context(|| format!("reading {}", path.display()))?, None)
        }
        InstanceSource::Gen(spec) => {
            let g = spec.generate()?;
            (spec.label(), g.instance, g.family.map(|f| f.solution.members()))
        }
    };
    let graph = instance.to_graph()?;
    let optimum = if graph.n() <= oracle_limit {
        let opt = exact_mwis(&graph, OracleOptions { max_n: oracle_limit, ..OracleOptions::default() })?;
        Some((opt.optimum_w, opt.best.members()))
    } else {
        None
    };
    Ok(Prepared { label: entry.name.clone().unwrap_or(label), graph, start, optimum })
}

fn run_row(inst: &Prepared, algo: &AlgoEntry, seed: u64, timing: bool) -> Result<BenchRow> {
    let mut cfg = algo.options.config(seed)?;
    if algo.start == Start::Family {
        let start = inst.start.clone().ok_or_else(|| anyhow!("instance has no designated solution to start from"))?;
        cfg = cfg.with_start(start);
    }
    let started = Instant::now();
    let run = solve(&inst.graph, &cfg)?;
    let elapsed = started.elapsed();
    let final_w = run.final_solution.total_w().clone();
    let (opt_w, ratio, cert) = match &inst.optimum {
        None => (None, None, CertStatus::NotApplicable),
        Some((opt_w, astar)) => {
            let ratio = (final_w > Rational::from_integer(0.into())).then(|| opt_w / &final_w);
            let certified = matches!(algo.options.algo, Algo::Squareimp | Algo::Logimp) && cfg.scaling.is_none();
            let cert = if certified {
                let report = certify_local_optimum(&inst.graph, &run.final_solution, astar, None)?;
                if report.passed() && report.claw_fixed_point == Some(true) {
                    CertStatus::Pass
                } else {
                    CertStatus::Fail
                }
            } else {
                CertStatus::NotApplicable
            };
            (Some(opt_w.clone()), ratio, cert)
        }
    };
    Ok(BenchRow {
        instance: inst.label.clone(),
        algo: algo.label(),
        seed,
        final_w: Some(final_w),
        opt_w,
        ratio,
        iters: Some(run.iterations),
        time_ms: timing.then_some(elapsed.as_millis() as u64),
        cert,
        error: None,
    })
}

fn error_row(instance: String, algo: String, seed: u64, err: &anyhow::Error) -> BenchRow {
    BenchRow {
        instance,
        algo,
        seed,
        final_w: None,
        opt_w: None,
        ratio: None,
        iters: None,
        time_ms: None,
        cert: CertStatus::Error,
        error: Some(format!("{err:#}")),
    }
}

/// Runs the cross product on up to `jobs` threads. Rows come back in
/// suite order (instance, then algorithm, then seed) and a failing row is
/// recorded without stopping the run.
pub fn run_bench(suite: &SuiteConfig, jobs: usize, timing: bool) -> Result<BenchReport> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let rows = pool.install(|| {
        let prepared: Vec<(String, Result<Prepared>)> = suite
            .instances
            .par_iter()
            .map(|e| {
                let fallback = e.name.clone().unwrap_or_else(|| match &e.source {
                    InstanceSource::Path { path } => path.display().to_string(),
                    InstanceSource::Gen(spec) => spec.label(),
                });
                (fallback, prepare(e, suite.oracle_limit))
            })
            .collect();
        let cells: Vec<(usize, &AlgoEntry, u64)> = (0..prepared.len())
            .flat_map(|i| suite.algorithms.iter().flat_map(move |a| suite.seeds.iter().map(move |&s| (i, a, s))))
            .collect();
        cells
            .par_iter()
            .map(|&(i, algo, seed)| match &prepared[i] {
                (_, Ok(inst)) => run_row(inst, algo, seed, timing)
                    .unwrap_or_else(|e| error_row(inst.label.clone(), algo.label(), seed, &e)),
                (name, Err(e)) => error_row(name.clone(), algo.label(), seed, e),
            })
            .collect()
    });
    Ok(BenchReport { rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    /// `.json` selects JSON; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

pub const CSV_HEADER: [&str; 9] = ["instance", "algo", "seed", "final_w", "opt_w", "ratio", "iters", "time_ms", "cert"];

fn opt_q(r: &Option<Rational>) -> String {
    r.as_ref().map(format_rational).unwrap_or_default()
}

pub fn emit_report(report: &BenchReport, format: ReportFormat, out: &mut dyn Write) -> Result<()> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in &report.rows {
                let cert = match &r.error {
                    Some(e) => format!("error: {e}"),
                    None => r.cert.to_string(),
                };
                w.write_record([
                    r.instance.clone(),
                    r.algo.clone(),
                    r.seed.to_string(),
                    opt_q(&r.final_w),
                    opt_q(&r.opt_w),
                    opt_q(&r.ratio),
                    r.iters.map(|i| i.to_string()).unwrap_or_default(),
                    r.time_ms.map(|t| t.to_string()).unwrap_or_default(),
                    cert,
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn read_report_json(text: &str) -> Result<BenchReport> {
    let report: BenchReport = serde_json::from_str(text)?;
    if let Some(r) = report.rows.iter().find(|r| r.ratio.as_ref().is_some_and(|q| q.numer() < q.denom())) {
        bail!("row {}/{} has a ratio below 1", r.instance, r.algo);
    }
    Ok(report)
}
