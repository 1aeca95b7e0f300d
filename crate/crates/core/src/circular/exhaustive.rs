use super::{AuxCycle, AuxGraph};
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::Scalar;

struct CycleDfs<'a, W> {
    g: &'a ConflictGraph<W>,
    h: &'a AuxGraph,
    max_len: usize,
    start: usize,
    used_anchor: Vec<bool>,
    used_edge: Vec<bool>,
    blocked: Vec<u32>,
    path_v: Vec<usize>,
    path_e: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl<W: Scalar> CycleDfs<'_, W> {
    fn free(&self, x: usize) -> bool {
        self.blocked[x] == 0
    }

    fn mark(&mut self, x: usize, delta: i32) {
        for v in std::iter::once(x).chain(self.g.neighbors(x).iter().copied()) {
            self.blocked[v] = (self.blocked[v] as i32 + delta) as u32;
        }
    }

    /// Adds `xs` to `X` if each one is free at the time it is added.
    fn try_add(&mut self, xs: &[usize]) -> bool {
        for (i, &x) in xs.iter().enumerate() {
            if !self.free(x) {
                for &y in &xs[..i] {
                    self.mark(y, -1);
                }
                return false;
            }
            self.mark(x, 1);
        }
        true
    }

    fn remove(&mut self, xs: &[usize]) {
        for &x in xs {
            self.mark(x, -1);
        }
    }

    fn dfs(&mut self, cur: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::budget("exhaustive aux cycle search", self.budget));
        }
        let depth = self.path_e.len();
        for &e in &self.h.incident[cur] {
            if self.used_edge[e] {
                continue;
            }
            let edge = &self.h.edges[e];
            let q = edge.other(cur);
            let u = edge.u;
            if q == self.start {
                if depth + 1 >= 2 && self.free(u) {
                    self.path_e.push(e);
                    return Ok(true);
                }
                continue;
            }
            let anchor = self.h.vertices[q].anchor;
            if q < self.start || self.used_anchor[anchor] || depth + 2 > self.max_len {
                continue;
            }
            if !self.try_add(&[u]) {
                continue;
            }
            let y = self.h.vertices[q].y.clone();
            if !self.try_add(&y) {
                self.remove(&[u]);
                continue;
            }
            self.used_anchor[anchor] = true;
            self.used_edge[e] = true;
            self.path_v.push(q);
            self.path_e.push(e);
            if self.dfs(q)? {
                return Ok(true);
            }
            self.path_e.pop();
            self.path_v.pop();
            self.used_edge[e] = false;
            self.used_anchor[anchor] = false;
            self.remove(&y);
            self.remove(&[u]);
        }
        Ok(false)
    }
}

/// Depth-first search over aux cycles of length `2..=max_len` whose
/// inducing vertices and `Y` sets form one independent set and whose
/// anchors are distinct. Cycles are rooted at their smallest aux vertex.
pub fn exhaustive_cycle_search<W: Scalar>(
    g: &ConflictGraph<W>,
    h: &AuxGraph,
    max_len: usize,
    budget: u64,
) -> Result<Option<AuxCycle>> {
    if max_len < 2 {
        return Ok(None);
    }
    let mut dfs = CycleDfs {
        g,
        h,
        max_len,
        start: 0,
        used_anchor: vec![false; g.n()],
        used_edge: vec![false; h.edges.len()],
        blocked: vec![0; g.n()],
        path_v: Vec::new(),
        path_e: Vec::new(),
        nodes: 0,
        budget,
    };
    for s in 0..h.vertices.len() {
        let y = h.vertices[s].y.clone();
        if !dfs.try_add(&y) {
            continue;
        }
        dfs.start = s;
        dfs.used_anchor[h.vertices[s].anchor] = true;
        dfs.path_v = vec![s];
        dfs.path_e.clear();
        if dfs.dfs(s)? {
            return Ok(Some(AuxCycle { vertices: dfs.path_v, edges: dfs.path_e }));
        }
        dfs.used_anchor[h.vertices[s].anchor] = false;
        dfs.remove(&y);
    }
    Ok(None)
}
