//! Weighted conflict graphs and the neighborhood algebra used by every
//! solver.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Weighted simple undirected graph with sorted adjacency lists.
///
/// Optionally carries the claimed claw bound `d` and, for graphs built
/// from a packing instance, the element list of every vertex (used as
/// the coloring universe by color coding).
#[derive(Clone, Debug, PartialEq)]
pub struct ConflictGraph<W> {
    adj: Vec<Vec<usize>>,
    weights: Vec<W>,
    claw_bound: Option<usize>,
    sets: Option<Vec<Vec<usize>>>,
    universe: usize,
}

impl<W: Scalar> ConflictGraph<W> {
    /// Builds a graph from weights and an edge list. Rejects loops,
    /// parallel edges, out-of-range ids and non-positive weights.
    pub fn new(weights: Vec<W>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = weights.len();
        if let Some(v) = weights.iter().position(|w| !w.positive()) {
            return Err(Error::InvalidInstance(format!("vertex {v} has non-positive weight")));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|p| p[0] == p[1]) {
                return Err(Error::InvalidInstance(format!("parallel edge at {v}")));
            }
        }
        Ok(ConflictGraph { adj, weights, claw_bound: None, sets: None, universe: 0 })
    }

    pub fn with_claw_bound(mut self, d: Option<usize>) -> Self {
        self.claw_bound = d;
        self
    }

    pub(crate) fn with_sets(mut self, sets: Vec<Vec<usize>>, universe: usize) -> Self {
        self.sets = Some(sets);
        self.universe = universe;
        self
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn weight(&self, v: usize) -> &W {
        &self.weights[v]
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Claimed claw bound `d`, if known.
    pub fn claw_bound(&self) -> Option<usize> {
        self.claw_bound
    }

    /// Element lists per vertex when the graph came from set packing.
    pub fn sets(&self) -> Option<&[Vec<usize>]> {
        self.sets.as_deref()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Closed neighborhood `N(U, W)`: members of `W` that are adjacent to
    /// or equal to some member of `U`.
    pub fn neighborhood(&self, u_set: &[usize], w_set: &[usize]) -> Result<BTreeSet<usize>> {
        for &v in u_set.iter().chain(w_set) {
            self.check_vertex(v)?;
        }
        let mut in_w = vec![false; self.n()];
        for &w in w_set {
            in_w[w] = true;
        }
        Ok(self.neighborhood_in(u_set, |v| in_w[v]))
    }

    /// Closed neighborhood of `U` restricted by a membership predicate.
    pub fn neighborhood_in(&self, u_set: &[usize], member: impl Fn(usize) -> bool) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &u in u_set {
            if member(u) {
                out.insert(u);
            }
            out.extend(self.adj[u].iter().copied().filter(|&v| member(v)));
        }
        out
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.adjacent(u, v)))
    }

    pub fn total_weight<'a>(&self, set: impl IntoIterator<Item = &'a usize>) -> W {
        set.into_iter().fold(W::zero(), |acc, &v| acc + self.weights[v].clone())
    }

    pub fn total_square<'a>(&self, set: impl IntoIterator<Item = &'a usize>) -> W {
        set.into_iter().fold(W::zero(), |acc, &v| acc + self.weights[v].square())
    }

    /// Subgraph induced by `keep` (sorted ascending). Returns the graph and
    /// the map from new ids to old ids.
    pub fn induced(&self, keep: &[usize]) -> (ConflictGraph<W>, Vec<usize>) {
        self.induced_with_weights(keep, |v| self.weights[v].clone())
    }

    pub(crate) fn induced_with_weights<V: Scalar>(
        &self,
        keep: &[usize],
        weight: impl Fn(usize) -> V,
    ) -> (ConflictGraph<V>, Vec<usize>) {
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = keep
            .iter()
            .map(|&v| self.adj[v].iter().filter(|&&u| new_id[u] != usize::MAX).map(|&u| new_id[u]).collect())
            .collect();
        let graph = ConflictGraph {
            adj,
            weights: keep.iter().map(|&v| weight(v)).collect(),
            claw_bound: self.claw_bound,
            sets: self.sets.as_ref().map(|s| keep.iter().map(|&v| s[v].clone()).collect()),
            universe: self.universe,
        };
        (graph, keep.to_vec())
    }

    /// Same structure with weights mapped through `f`.
    pub fn map_weights<V: Scalar>(&self, f: impl Fn(&W) -> V) -> ConflictGraph<V> {
        ConflictGraph {
            adj: self.adj.clone(),
            weights: self.weights.iter().map(f).collect(),
            claw_bound: self.claw_bound,
            sets: self.sets.clone(),
            universe: self.universe,
        }
    }

    /// Exact rational copy. Fails on non-finite float weights.
    pub fn to_rational(&self) -> Result<ConflictGraph<Rational>> {
        if self.weights.iter().any(|w| w.to_rational().is_none()) {
            return Err(Error::InvalidInstance("non-finite weight".into()));
        }
        Ok(self.map_weights(|w| w.to_rational().expect("checked above")))
    }

    /// Converts to another scalar lane. Integer lanes require integral
    /// weights.
    pub fn convert<V: Scalar>(&self) -> Result<ConflictGraph<V>> {
        let mut weights = Vec::with_capacity(self.n());
        for (v, w) in self.weights.iter().enumerate() {
            let conv = w.to_rational().and_then(|r| V::from_rational(&r));
            match conv {
                Some(x) if x.positive() => weights.push(x),
                _ => return Err(Error::InvalidInstance(format!("weight of {v} not representable"))),
            }
        }
        Ok(ConflictGraph {
            adj: self.adj.clone(),
            weights,
            claw_bound: self.claw_bound,
            sets: self.sets.clone(),
            universe: self.universe,
        })
    }
}

/// Result of a claw-freeness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClawCheck {
    Free,
    Claw { center: usize, talons: Vec<usize> },
}

impl ClawCheck {
    pub fn is_free(&self) -> bool {
        matches!(self, ClawCheck::Free)
    }
}

/// Searches for a vertex with `d` pairwise non-adjacent neighbors.
///
/// `budget` bounds the number of partial talon sets explored.
pub fn verify_claw_free<W: Scalar>(g: &ConflictGraph<W>, d: usize, budget: u64) -> Result<ClawCheck> {
    if d == 0 {
        // Every vertex is the center of a 0-claw.
        return Ok(if g.n() == 0 { ClawCheck::Free } else { ClawCheck::Claw { center: 0, talons: vec![] } });
    }
    let mut work = 0u64;
    for c in 0..g.n() {
        let nbrs = g.neighbors(c);
        if nbrs.len() < d {
            continue;
        }
        let mut stack = Vec::with_capacity(d);
        if independent_extend(g, nbrs, 0, d, &mut stack, &mut work, budget)? {
            return Ok(ClawCheck::Claw { center: c, talons: stack });
        }
    }
    Ok(ClawCheck::Free)
}

fn independent_extend<W: Scalar>(
    g: &ConflictGraph<W>,
    pool: &[usize],
    from: usize,
    target: usize,
    stack: &mut Vec<usize>,
    work: &mut u64,
    budget: u64,
) -> Result<bool> {
    if stack.len() == target {
        return Ok(true);
    }
    if pool.len() - from < target - stack.len() {
        return Ok(false);
    }
    for i in from..pool.len() {
        *work += 1;
        if *work > budget {
            return Err(Error::budget("claw search", budget));
        }
        let x = pool[i];
        if stack.iter().all(|&s| !g.adjacent(s, x)) {
            stack.push(x);
            if independent_extend(g, pool, i + 1, target, stack, work, budget)? {
                return Ok(true);
            }
            stack.pop();
        }
    }
    Ok(false)
}
