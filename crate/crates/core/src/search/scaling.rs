use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{greedy, solve, RunTrace, SolverConfig};
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::{Rational, Scalar};
use crate::solution::Solution;
use crate::IntegerGraph;

/// Integer-weight copy of a graph after scaling and truncation.
#[derive(Clone, Debug)]
pub struct ScaledGraph {
    pub graph: IntegerGraph,
    /// `original_ids[i]` is the input vertex behind scaled vertex `i`.
    pub original_ids: Vec<usize>,
    pub factor: Rational,
    pub greedy_weight: Rational,
}

/// Scales all weights so the greedy solution weighs `N·|V|`, floors them,
/// and drops vertices whose floored weight is 0.
pub fn scaled_weights<W: Scalar>(g: &ConflictGraph<W>, n_const: &Rational) -> Result<ScaledGraph> {
    let rg = g.to_rational()?;
    let greedy_weight = greedy(&rg).total_w().clone();
    if greedy_weight.is_zero() {
        return Ok(ScaledGraph {
            graph: ConflictGraph::new(vec![], &[])?,
            original_ids: vec![],
            factor: Rational::zero(),
            greedy_weight,
        });
    }
    let factor = n_const * Rational::from_integer(BigInt::from(g.n())) / &greedy_weight;
    let mut floored = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let f = (rg.weight(v) * &factor).floor().to_integer();
        let f = f.to_i128().ok_or_else(|| Error::InvalidInstance("scaled weight exceeds i128".into()))?;
        floored.push(f);
    }
    let keep: Vec<usize> = (0..g.n()).filter(|&v| floored[v] > 0).collect();
    let (graph, original_ids) = g.induced_with_weights(&keep, |v| floored[v]);
    Ok(ScaledGraph { graph, original_ids, factor, greedy_weight })
}

/// `(d−1)² · N² · |V|²`.
pub fn iteration_bound(d: usize, n_const: &Rational, num_vertices: usize) -> Rational {
    let dm1 = Rational::from_integer(BigInt::from(d.saturating_sub(1)));
    let nv = Rational::from_integer(BigInt::from(num_vertices));
    let x = dm1 * n_const * nv;
    &x * &x
}

/// Runs the configured inner solver on scaled integer weights and maps the
/// result back to the input graph.
pub fn scale_truncate_run<W: Scalar>(g: &ConflictGraph<W>, cfg: &SolverConfig) -> Result<RunTrace<W>> {
    let n_const = cfg.scaling.clone().ok_or_else(|| Error::Contract("scaling constant missing".into()))?;
    let started = Instant::now();
    let scaled = scaled_weights(g, &n_const)?;

    let mut inner = cfg.clone();
    inner.scaling = None;
    if let Some(start) = &cfg.start {
        let mut new_id = vec![usize::MAX; g.n()];
        for (i, &v) in scaled.original_ids.iter().enumerate() {
            new_id[v] = i;
        }
        inner.start =
            Some(start.iter().filter(|&&v| v < g.n() && new_id[v] != usize::MAX).map(|&v| new_id[v]).collect());
    }
    let run = solve(&scaled.graph, &inner)?;

    let members: Vec<usize> = run.final_solution.members().iter().map(|&i| scaled.original_ids[i]).collect();
    let (d, guessed) = match g.claw_bound() {
        Some(d) => (d, false),
        None => (g.max_degree() + 1, true),
    };
    let mut notes = run.notes;
    notes.push(format!("scale factor {}", crate::scalar::format_rational(&scaled.factor)));
    notes.push(format!("{} vertices dropped by truncation", g.n() - scaled.original_ids.len()));
    if guessed {
        notes.push(format!("claw bound unknown; using max degree + 1 = {d}"));
    }
    Ok(RunTrace {
        iterations: run.iterations,
        improvements: run.improvements,
        final_solution: Solution::from_members(g, &members)?,
        scaled: true,
        wall_time: started.elapsed(),
        circular_complete: run.circular_complete,
        iteration_bound: Some(iteration_bound(d, &n_const, g.n())),
        notes,
    })
}
