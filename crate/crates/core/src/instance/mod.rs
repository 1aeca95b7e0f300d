//! Problem instances: weighted k-set packing and plain weighted graphs.

mod io;

pub use io::{from_json, parse_text, read_instance, to_json, write_text};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::{Rational, Scalar};

/// Family of weighted sets of size at most `k` over `0..universe_size`.
#[derive(Clone, Debug, PartialEq)]
pub struct PackingInstance {
    pub universe_size: usize,
    pub k: usize,
    pub sets: Vec<Vec<usize>>,
    pub weights: Vec<Rational>,
}

impl PackingInstance {
    pub fn new(universe_size: usize, k: usize, sets: Vec<Vec<usize>>, weights: Vec<Rational>) -> Result<Self> {
        let inst = PackingInstance { universe_size, k, sets, weights };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if self.sets.len() != self.weights.len() {
            return bad(format!("{} sets but {} weights", self.sets.len(), self.weights.len()));
        }
        for (i, set) in self.sets.iter().enumerate() {
            if set.is_empty() || set.len() > self.k {
                return bad(format!("set {i} has {} elements, allowed 1..={}", set.len(), self.k));
            }
            if let Some(&e) = set.iter().find(|&&e| e >= self.universe_size) {
                return bad(format!("set {i} uses element {e} outside universe {}", self.universe_size));
            }
            if set.iter().collect::<BTreeSet<_>>().len() != set.len() {
                return bad(format!("set {i} repeats an element"));
            }
        }
        if let Some(i) = self.weights.iter().position(|w| !w.positive()) {
            return bad(format!("set {i} has non-positive weight"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Weighted graph given directly by vertices and edges.
#[derive(Clone, Debug, PartialEq)]
pub struct MwisInstance {
    pub weights: Vec<Rational>,
    pub edges: Vec<(usize, usize)>,
    /// A `d` for which the graph is known to be `d`-claw free.
    pub claw_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Packing(PackingInstance),
    Mwis(MwisInstance),
}

impl Instance {
    pub fn to_graph(&self) -> Result<ConflictGraph<Rational>> {
        match self {
            Instance::Packing(p) => build_conflict_graph(p),
            Instance::Mwis(m) => Ok(ConflictGraph::new(m.weights.clone(), &m.edges)?.with_claw_bound(m.claw_bound)),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Instance::Packing(p) => p.len(),
            Instance::Mwis(m) => m.weights.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Vertex `i` is set `i`; two vertices are adjacent iff their sets
/// intersect. The graph is `(k+1)`-claw free and records that bound.
pub fn build_conflict_graph(inst: &PackingInstance) -> Result<ConflictGraph<Rational>> {
    inst.validate()?;
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); inst.universe_size];
    for (i, set) in inst.sets.iter().enumerate() {
        for &e in set {
            holders[e].push(i);
        }
    }
    let mut edges = BTreeSet::new();
    for list in &holders {
        for (a, &i) in list.iter().enumerate() {
            for &j in &list[a + 1..] {
                edges.insert((i, j));
            }
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    let g = ConflictGraph::new(inst.weights.clone(), &edges)?
        .with_claw_bound(Some(inst.k + 1))
        .with_sets(inst.sets.clone(), inst.universe_size);
    Ok(g)
}
