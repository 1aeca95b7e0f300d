//! JSON documents written by `solve` and read back by `verify`.

use anyhow::{Context, Result};
use clawpack::scalar::rational_serde;
use clawpack::search::RunTrace;
use clawpack::{OracleResult, Rational, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDoc {
    pub kind: String,
    pub size: usize,
    #[serde(with = "rational_serde")]
    pub delta_w2: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub algo: String,
    pub seed: u64,
    pub iterations: usize,
    pub improvements: Vec<StepDoc>,
    pub final_members: Vec<usize>,
    #[serde(with = "rational_serde")]
    pub final_weight: Rational,
    pub scaled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circular_complete: Option<bool>,
    #[serde(default, with = "rational_serde::option", skip_serializing_if = "Option::is_none")]
    pub iteration_bound: Option<Rational>,
    #[serde(default)]
    pub notes: Vec<String>,
    /// Only written with `--timing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_ms: Option<u64>,
}

impl TraceDoc {
    pub fn from_run<W: Scalar>(algo: &str, seed: u64, run: &RunTrace<W>, timing: bool) -> Result<Self> {
        let final_weight = run.final_solution.total_w().to_rational().context("final weight is not finite")?;
        Ok(TraceDoc {
            algo: algo.into(),
            seed,
            iterations: run.iterations,
            improvements: run
                .improvements
                .iter()
                .map(|s| StepDoc { kind: s.kind.into(), size: s.size, delta_w2: s.delta.clone() })
                .collect(),
            final_members: run.final_solution.members(),
            final_weight,
            scaled: run.scaled,
            circular_complete: run.circular_complete,
            iteration_bound: run.iteration_bound.clone(),
            notes: run.notes.clone(),
            time_ms: timing.then_some(run.wall_time.as_millis() as u64),
        })
    }

    pub fn from_exact(opt: &OracleResult<Rational>) -> Self {
        TraceDoc {
            algo: "exact".into(),
            seed: 0,
            iterations: 0,
            improvements: Vec::new(),
            final_members: opt.best.members(),
            final_weight: opt.optimum_w.clone(),
            scaled: false,
            circular_complete: None,
            iteration_bound: None,
            notes: vec![format!("{} search nodes", opt.nodes_explored)],
            time_ms: None,
        }
    }
}

/// Member list from a JSON file: a bare array, or the first array found
/// under one of `keys` (tried in order).
pub fn read_members_from(text: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let value: serde_json::Value = serde_json::from_str(text).context("solution file is not JSON")?;
    let list = match &value {
        serde_json::Value::Array(_) => Some(value.clone()),
        serde_json::Value::Object(map) => keys.iter().find_map(|k| map.get(*k).cloned()),
        _ => None,
    };
    let list = list.with_context(|| format!("expected an array or one of the fields {keys:?}"))?;
    serde_json::from_value(list).context("members must be vertex ids")
}

/// Solution members from a trace, a family file or `{"members": [...]}`.
pub fn read_members(text: &str) -> Result<Vec<usize>> {
    read_members_from(text, &["final_members", "members", "solution"])
}
