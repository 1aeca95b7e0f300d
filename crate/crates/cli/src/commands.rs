use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use clawpack::analysis::{certify_local_optimum, check_constants, AnalysisParams};
use clawpack::instance::{read_instance, to_json, write_text};
use clawpack::search::solve;
use clawpack::{exact_mwis, OracleOptions, Rational, Solution};
use serde::Serialize;

use crate::bench::{emit_report, run_bench, ReportFormat, SuiteConfig};
use crate::options::{parse_q, GenSpec, SolveOptions};
use crate::trace::{read_members, read_members_from, TraceDoc};

#[derive(Debug, Parser)]
#[command(name = "clawpack", version, about = "Local search for weighted independent set and k-set packing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a solver and write its trace as JSON.
    Solve(SolveArgs),
    /// Check the charge certificates of a solution.
    Verify(VerifyArgs),
    /// Decide the analysis constant conditions for a given delta.
    Constants(ConstantsArgs),
    /// Write a generated instance.
    Gen(GenArgs),
    /// Run a benchmark suite.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Solution file to start from.
    #[arg(long)]
    pub start: Option<PathBuf>,
    /// Solve exactly with branch and bound instead.
    #[arg(long)]
    pub exact: bool,
    /// Include wall time in the output.
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub options: SolveOptions,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    /// Comparison set; the exact optimum when omitted.
    #[arg(long)]
    pub optimum: Option<PathBuf>,
    /// Also classify the comparison set with these analysis constants.
    #[arg(long, value_parser = parse_q)]
    pub delta: Option<Rational>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, value_parser = parse_q)]
    pub delta: Rational,
    #[arg(long, value_parser = parse_q)]
    pub eps_tilde: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub eps_prime: Option<Rational>,
    #[arg(long, value_parser = parse_q)]
    pub d_delta: Option<Rational>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub spec: GenSpec,
    /// Instance file; `.json` selects JSON, anything else the text format.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the designated solution and optimum of the family.
    #[arg(long, global = true)]
    pub family_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub suite: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Report file; `.json` selects JSON, anything else CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub timing: bool,
}

fn write_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
            f(&mut w)?;
            w.flush()?;
        }
        None => f(&mut std::io::stdout().lock())?,
    }
    Ok(())
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    write_output(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

/// Runs a command; the result is the process exit status.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve(a) => solve_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Constants(a) => constants_cmd(a),
        Command::Gen(a) => gen_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    }
}

fn solve_cmd(a: SolveArgs) -> Result<bool> {
    let g = read_instance(&a.input)?.to_graph()?;
    let doc = if a.exact {
        let opt = exact_mwis(&g, OracleOptions::default())?;
        TraceDoc::from_exact(&opt)
    } else {
        let mut cfg = a.options.config(a.seed)?;
        if let Some(p) = &a.start {
            cfg = cfg.with_start(read_members(&std::fs::read_to_string(p)?)?);
        }
        let run = solve(&g, &cfg)?;
        TraceDoc::from_run(&a.options.label(), a.seed, &run, a.timing)?
    };
    write_json(a.out.as_deref(), &doc)?;
    Ok(true)
}

fn verify_cmd(a: VerifyArgs) -> Result<bool> {
    let g = read_instance(&a.input)?.to_graph()?;
    let members = read_members(&std::fs::read_to_string(&a.solution)?)?;
    let sol = Solution::from_members(&g, &members)?;
    let astar = match &a.optimum {
        Some(p) => read_members_from(&std::fs::read_to_string(p)?, &["optimum", "final_members", "members"])?,
        None => exact_mwis(&g, OracleOptions::default())?.best.members(),
    };
    let params = a.delta.map(AnalysisParams::new).transpose()?;
    let report = certify_local_optimum(&g, &sol, &astar, params.as_ref())?;
    write_json(a.out.as_deref(), &report)?;
    Ok(report.passed())
}

fn constants_cmd(a: ConstantsArgs) -> Result<bool> {
    let mut params = AnalysisParams::new(a.delta)?;
    if let Some(x) = a.eps_tilde {
        params = params.with_eps_tilde(x);
    }
    if let Some(x) = a.eps_prime {
        params = params.with_eps_prime(x);
    }
    if let Some(x) = a.d_delta {
        params = params.with_d_delta(x);
    }
    let checks = check_constants(&params)?;
    let ok = checks.iter().all(|c| c.holds);
    #[derive(Serialize)]
    struct Doc<'a> {
        params: &'a AnalysisParams,
        all_hold: bool,
        checks: &'a [clawpack::analysis::ConstantCheck],
    }
    write_json(None, &Doc { params: &params, all_hold: ok, checks: &checks })?;
    Ok(ok)
}

fn gen_cmd(a: GenArgs) -> Result<bool> {
    let generated = a.spec.generate()?;
    let json = a.out.as_deref().is_some_and(|p| ReportFormat::from_path(p) == ReportFormat::Json);
    let text = if json { to_json(&generated.instance) + "\n" } else { write_text(&generated.instance) };
    write_output(a.out.as_deref(), |w| Ok(w.write_all(text.as_bytes())?))?;
    if let Some(path) = &a.family_out {
        let family = generated.family.context("this generator has no designated solution")?;
        #[derive(Serialize)]
        struct Doc {
            solution: Vec<usize>,
            optimum: Vec<usize>,
            #[serde(with = "clawpack::scalar::rational_serde")]
            ratio: Rational,
        }
        let doc = Doc { solution: family.solution.members(), optimum: family.optimum.members(), ratio: family.ratio() };
        write_json(Some(path), &doc)?;
    }
    Ok(true)
}

fn bench_cmd(a: BenchArgs) -> Result<bool> {
    let suite = SuiteConfig::read(&a.suite)?;
    let report = run_bench(&suite, a.jobs, a.timing)?;
    let format = a.out.as_deref().map_or(ReportFormat::Csv, ReportFormat::from_path);
    write_output(a.out.as_deref(), |w| emit_report(&report, format, w))?;
    Ok(report.ok())
}
