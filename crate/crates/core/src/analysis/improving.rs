//! Multigraph tools: bad vertex deletion and improving subgraphs, i.e.
//! subgraphs with minimum degree 2 and more edges than vertices.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected multigraph; loops are allowed and count twice towards the
/// degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    incident: Vec<Vec<usize>>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut incident = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            incident[u].push(e);
            if u != v {
                incident[v].push(e);
            }
        }
        Ok(Multigraph { n, edges, incident })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Degree of `v` counting only edges with both ends in `alive`.
    pub fn degree_in(&self, v: usize, alive: &[bool]) -> usize {
        self.incident[v]
            .iter()
            .map(|&e| match self.edges[e] {
                (a, b) if a == b => 2,
                _ if alive[self.other(e, v)] => 1,
                _ => 0,
            })
            .sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree_in(v, &vec![true; self.n])
    }
}

/// Outcome of bad vertex deletion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deletion {
    /// Survivors, each of degree at least 3 among themselves.
    pub survivors: Vec<usize>,
    /// `rounds[0]` is `Y`; `rounds[i]` are the vertices of `X` removed in
    /// round `i`.
    pub rounds: Vec<Vec<usize>>,
}

/// Starting from `X`, repeatedly removes in parallel every vertex whose
/// degree in the subgraph induced by the remaining part of `X` is at most 2.
/// `Y` is removed up front.
pub fn bad_vertex_deletion(graph: &Multigraph, x: &[usize], y: &[usize]) -> Result<Deletion> {
    let mut alive = vec![false; graph.n()];
    for &v in x {
        if v >= graph.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: graph.n() });
        }
        alive[v] = true;
    }
    if let Some(&v) = y.iter().find(|&&v| v >= graph.n() || alive[v]) {
        return Err(Error::Contract(format!("vertex {v} is not in the complement of X")));
    }
    let mut rounds = vec![y.to_vec()];
    loop {
        let bad: Vec<usize> = (0..graph.n()).filter(|&v| alive[v] && graph.degree_in(v, &alive) <= 2).collect();
        if bad.is_empty() {
            break;
        }
        for &v in &bad {
            alive[v] = false;
        }
        rounds.push(bad);
    }
    Ok(Deletion { survivors: (0..graph.n()).filter(|&v| alive[v]).collect(), rounds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    /// Edge ids into the host multigraph.
    pub edges: Vec<usize>,
}

impl Subgraph {
    /// Minimum degree at least 2 and more edges than vertices.
    pub fn is_improving(&self, graph: &Multigraph) -> bool {
        let mut deg = vec![0usize; graph.n()];
        let members: BTreeSet<usize> = self.vertices.iter().copied().collect();
        for &e in &self.edges {
            let (a, b) = graph.edges()[e];
            if !members.contains(&a) || !members.contains(&b) {
                return false;
            }
            deg[a] += 1;
            deg[b] += 1;
        }
        self.edges.len() > self.vertices.len() && self.vertices.iter().all(|&v| deg[v] >= 2)
    }

    pub fn is_connected(&self, graph: &Multigraph) -> bool {
        let Some(&start) = self.vertices.first() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.edges {
                let (a, b) = graph.edges()[e];
                if a == v || b == v {
                    let w = if a == v { b } else { a };
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

struct Work {
    steps: u64,
    budget: u64,
}

impl Work {
    fn tick(&mut self, n: usize) -> Result<()> {
        self.steps += n as u64;
        if self.steps > self.budget {
            return Err(Error::budget("improving subgraph search", self.budget));
        }
        Ok(())
    }
}

/// Edge ids of a shortest cycle through `root` among `alive` vertices, if
/// the BFS from `root` closes one whose two branches meet only at `root`.
fn cycle_at(graph: &Multigraph, root: usize, alive: &[bool], work: &mut Work) -> Result<Option<Vec<usize>>> {
    let n = graph.n();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    // First vertex below the root on the tree path.
    let mut branch = vec![usize::MAX; n];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut best: Option<(usize, usize, usize)> = None;
    while let Some(v) = queue.pop_front() {
        work.tick(graph.incident(v).len())?;
        if best.is_some_and(|(len, _, _)| 2 * dist[v] >= len) {
            break;
        }
        for &e in graph.incident(v) {
            if e == parent[v] {
                continue;
            }
            let w = graph.other(e, v);
            if !alive[w] {
                continue;
            }
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = e;
                branch[w] = if v == root { w } else { branch[v] };
                queue.push_back(w);
            } else if (w == v && v == root) || (w != v && branch[w] != branch[v]) {
                // A loop at the root, or an edge joining two branches (the
                // root counts as its own branch).
                let len = dist[v] + dist[w] + 1;
                if best.is_none_or(|(l, _, _)| len < l) {
                    best = Some((len, e, v));
                }
            }
        }
    }
    let Some((_, e, v)) = best else {
        return Ok(None);
    };
    let w = graph.other(e, v);
    let mut cycle = vec![e];
    for mut x in [v, w] {
        if v == w {
            break;
        }
        while x != root {
            cycle.push(parent[x]);
            x = graph.other(parent[x], x);
        }
    }
    cycle.sort_unstable();
    cycle.dedup();
    Ok(Some(cycle))
}

/// Grows a cycle into a subgraph with exactly one more edge than vertices
/// by a BFS from the cycle until a non-tree edge closes a second cycle.
fn extend_cycle(graph: &Multigraph, cycle: &[usize], alive: &[bool], work: &mut Work) -> Result<Option<Subgraph>> {
    let n = graph.n();
    let mut on_cycle_edge = vec![false; graph.edges().len()];
    let mut reached = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &e in cycle {
        on_cycle_edge[e] = true;
        let (a, b) = graph.edges()[e];
        for x in [a, b] {
            if !reached[x] {
                reached[x] = true;
                queue.push_back(x);
            }
        }
    }
    let mut closing = None;
    'bfs: while let Some(v) = queue.pop_front() {
        work.tick(graph.incident(v).len())?;
        for &e in graph.incident(v) {
            if on_cycle_edge[e] || e == parent[v] {
                continue;
            }
            let w = graph.other(e, v);
            if !alive[w] {
                continue;
            }
            if reached[w] {
                if parent[w] != e {
                    closing = Some(e);
                    break 'bfs;
                }
            } else {
                reached[w] = true;
                parent[w] = e;
                queue.push_back(w);
            }
        }
    }
    let Some(e) = closing else { return Ok(None) };
    let mut edges: BTreeSet<usize> = cycle.iter().copied().collect();
    edges.insert(e);
    let (a, b) = graph.edges()[e];
    for mut x in [a, b] {
        while parent[x] != usize::MAX {
            edges.insert(parent[x]);
            x = graph.other(parent[x], x);
        }
    }
    let vertices: BTreeSet<usize> = edges.iter().flat_map(|&e| [graph.edges()[e].0, graph.edges()[e].1]).collect();
    Ok(Some(Subgraph { vertices: vertices.into_iter().collect(), edges: edges.into_iter().collect() }))
}

/// Vertices of the 2-core.
fn two_core(graph: &Multigraph) -> Vec<bool> {
    let mut alive = vec![true; graph.n()];
    let mut deg: Vec<usize> = (0..graph.n()).map(|v| graph.degree(v)).collect();
    let mut stack: Vec<usize> = (0..graph.n()).filter(|&v| deg[v] < 2).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &e in graph.incident(v) {
            let w = graph.other(e, v);
            if w != v && alive[w] {
                deg[w] -= 1;
                if deg[w] < 2 {
                    stack.push(w);
                }
            }
        }
    }
    alive
}

/// Connected subgraph with minimum degree 2 and `|E| = |V| + 1`, built as a
/// cycle through some vertex plus one more path or cycle attached to it.
/// Every vertex of the 2-core is tried as the root and the smallest result
/// is kept. Returns `None` when no component has more edges than vertices.
pub fn find_improving_subgraph(graph: &Multigraph, budget: u64) -> Result<Option<Subgraph>> {
    let alive = two_core(graph);
    let mut work = Work { steps: 0, budget };
    let mut best: Option<Subgraph> = None;
    for root in (0..graph.n()).filter(|&v| alive[v]) {
        let Some(cycle) = cycle_at(graph, root, &alive, &mut work)? else {
            continue;
        };
        if let Some(sub) = extend_cycle(graph, &cycle, &alive, &mut work)? {
            if best.as_ref().is_none_or(|b| sub.edges.len() < b.edges.len()) {
                best = Some(sub);
            }
        }
    }
    Ok(best)
}

impl Subgraph {
    /// `|E| ≤ 32·log₂ n`, the size the search should meet on graphs of
    /// minimum degree 3.
    pub fn within_log_bound(&self, n: usize) -> bool {
        n >= 2 && self.edges.len() as f64 <= 32.0 * (n as f64).log2()
    }
}
