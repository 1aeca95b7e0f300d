//! Solvers: greedy, claw-shaped local search on `w²`, the same with
//! circular improvements, and exhaustive local search on `w^α`.

mod claw;
mod greedy;
mod scaling;

pub use claw::{find_claw_improvement, DEFAULT_CLAW_BUDGET};
pub use greedy::{greedy, greedy_order};
pub use scaling::{iteration_bound, scale_truncate_run, scaled_weights, ScaledGraph};

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circular::{build_anchor_maps, find_circular_improvement, CircularOutcome, ColorCodingParams};
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::oracle::{exhaustive_improvement_search, Exponent, DEFAULT_NODE_BUDGET};
use crate::scalar::{floor_scaled_log, Rational, Scalar};
use crate::solution::{Improvement, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Greedy,
    SquareImp,
    LogImp,
    Parametrized,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub mode: Mode,
    /// Exponent for parametrized mode.
    pub exponent: Exponent,
    /// Size cap factor `C` for parametrized mode: `|X| ≤ ⌊C·log n⌋`.
    pub cap_factor: Rational,
    pub log_base: u32,
    /// Scaling constant `N > 1`; `None` solves on the given weights.
    pub scaling: Option<Rational>,
    pub seed: u64,
    pub circular: ColorCodingParams,
    /// Incumbent to start from instead of the empty set.
    pub start: Option<Vec<usize>>,
    pub claw_budget: u64,
    pub enum_budget: u64,
    pub max_iterations: Option<usize>,
}

impl SolverConfig {
    pub fn new(mode: Mode) -> Self {
        SolverConfig {
            mode,
            exponent: Exponent::squared(),
            cap_factor: Rational::from_integer(2.into()),
            log_base: 2,
            scaling: None,
            seed: 0,
            circular: ColorCodingParams::default(),
            start: None,
            claw_budget: DEFAULT_CLAW_BUDGET,
            enum_budget: DEFAULT_NODE_BUDGET,
            max_iterations: None,
        }
    }

    pub fn with_start(mut self, start: Vec<usize>) -> Self {
        self.start = Some(start);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = &self.scaling {
            if *n <= Rational::from_integer(1.into()) {
                return Err(Error::Contract("scaling constant N must exceed 1".into()));
            }
        }
        if !self.cap_factor.positive() {
            return Err(Error::Contract("size cap factor C must be positive".into()));
        }
        if self.log_base < 2 {
            return Err(Error::Contract("log base must be at least 2".into()));
        }
        if let Exponent::Power(a) = &self.exponent {
            Exponent::power(a.clone())?;
        }
        self.circular.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub kind: &'static str,
    pub size: usize,
    /// Change of the objective (`w²`, or `w^α` in parametrized mode) on
    /// the weights the solver actually ran on.
    pub delta: Rational,
}

#[derive(Clone, Debug)]
pub struct RunTrace<W> {
    pub iterations: usize,
    pub improvements: Vec<StepRecord>,
    pub final_solution: Solution<W>,
    pub scaled: bool,
    pub wall_time: Duration,
    /// Whether the last circular search was exhaustive; `None` if no
    /// circular search ran.
    pub circular_complete: Option<bool>,
    /// `(d−1)²·N²·|V|²` for scaled runs.
    pub iteration_bound: Option<Rational>,
    pub notes: Vec<String>,
}

impl<W: Scalar> RunTrace<W> {
    fn new(final_solution: Solution<W>) -> Self {
        RunTrace {
            iterations: 0,
            improvements: Vec::new(),
            final_solution,
            scaled: false,
            wall_time: Duration::ZERO,
            circular_complete: None,
            iteration_bound: None,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, g: &ConflictGraph<W>, imp: &Improvement, delta: Option<Rational>) {
        let delta = match delta {
            Some(d) => d,
            None => {
                let d = self.final_solution.apply(g, imp);
                d.to_rational().unwrap_or_default()
            }
        };
        self.iterations += 1;
        self.improvements.push(StepRecord { kind: imp.kind_name(), size: imp.size(), delta });
    }
}

fn start_solution<W: Scalar>(g: &ConflictGraph<W>, cfg: &SolverConfig) -> Result<Solution<W>> {
    match &cfg.start {
        None => Ok(Solution::empty(g.n())),
        Some(members) => {
            let s = Solution::from_members(g, members)?;
            if !g.is_independent(&s.members()) {
                return Err(Error::Contract("start solution is not independent".into()));
            }
            Ok(s)
        }
    }
}

fn check_iterations(cfg: &SolverConfig, done: usize) -> Result<()> {
    match cfg.max_iterations {
        Some(cap) if done >= cap => Err(Error::budget("solver iterations", cap as u64)),
        _ => Ok(()),
    }
}

/// Runs the configured solver, through the scaling wrapper when `N` is
/// set.
pub fn solve<W: Scalar>(g: &ConflictGraph<W>, cfg: &SolverConfig) -> Result<RunTrace<W>> {
    cfg.validate()?;
    if cfg.scaling.is_some() {
        return scale_truncate_run(g, cfg);
    }
    let started = Instant::now();
    let mut trace = match cfg.mode {
        Mode::Greedy => {
            let mut t = RunTrace::new(greedy(g));
            t.notes.push("greedy".into());
            t
        }
        Mode::SquareImp => squareimp(g, cfg)?,
        Mode::LogImp => logimp(g, cfg)?,
        Mode::Parametrized => parametrized_local_search(g, cfg)?,
    };
    trace.wall_time = started.elapsed();
    Ok(trace)
}

/// Applies claw-shaped improvements of `w²(A)` until none is left.
pub fn squareimp<W: Scalar>(g: &ConflictGraph<W>, cfg: &SolverConfig) -> Result<RunTrace<W>> {
    let mut trace = RunTrace::new(start_solution(g, cfg)?);
    while let Some(imp) = find_claw_improvement(g, &trace.final_solution, cfg.claw_budget)? {
        check_iterations(cfg, trace.iterations)?;
        trace.record(g, &imp, None);
    }
    Ok(trace)
}

/// Claw-shaped improvements first, circular ones when no claw improves.
pub fn logimp<W: Scalar>(g: &ConflictGraph<W>, cfg: &SolverConfig) -> Result<RunTrace<W>> {
    let mut trace = RunTrace::new(start_solution(g, cfg)?);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let y_cap = cfg.circular.effective_y_cap(g);
    trace.notes.push(format!("aux graph Y sets limited to {y_cap} vertices"));
    loop {
        check_iterations(cfg, trace.iterations)?;
        if let Some(imp) = find_claw_improvement(g, &trace.final_solution, cfg.claw_budget)? {
            trace.record(g, &imp, None);
            continue;
        }
        let maps = build_anchor_maps(g, &trace.final_solution)?;
        match find_circular_improvement(g, &trace.final_solution, &maps, &cfg.circular, &mut rng)? {
            CircularOutcome::Found(imp) => {
                trace.circular_complete = None;
                trace.record(g, &imp, None);
            }
            CircularOutcome::NotFound { complete } => {
                trace.circular_complete = Some(complete);
                break;
            }
            CircularOutcome::Incomplete(reason) => {
                return Err(Error::Budget {
                    what: format!("circular search: {reason}"),
                    limit: cfg.circular.aux_vertex_cap as u64,
                    best: trace.final_solution.members(),
                });
            }
        }
    }
    Ok(trace)
}

/// `⌊C · log_base(n)⌋`.
pub fn size_cap(cfg: &SolverConfig, n: usize) -> usize {
    floor_scaled_log(&cfg.cap_factor, n, cfg.log_base)
}

/// Applies `w^α` improvements of size at most `⌊C·log n⌋` until none is
/// left, searching exhaustively each round.
pub fn parametrized_local_search<W: Scalar>(g: &ConflictGraph<W>, cfg: &SolverConfig) -> Result<RunTrace<W>> {
    let mut trace = RunTrace::new(start_solution(g, cfg)?);
    let cap = size_cap(cfg, g.n());
    trace.notes.push(format!("improvement size cap {cap}"));
    let powered = crate::oracle::PoweredWeights::new(g, &cfg.exponent)?;
    loop {
        check_iterations(cfg, trace.iterations)?;
        let found = exhaustive_improvement_search(g, &trace.final_solution, &cfg.exponent, cap, cfg.enum_budget)
            .map_err(|e| match e {
                Error::Budget { what, limit, .. } => {
                    Error::Budget { what, limit, best: trace.final_solution.members() }
                }
                other => other,
            })?;
        let Some(imp) = found else { break };
        let delta = powered.delta(&imp.added, &imp.removed);
        trace.final_solution.apply(g, &imp);
        trace.record(g, &imp, Some(delta));
    }
    Ok(trace)
}
