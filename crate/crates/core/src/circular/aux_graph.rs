use std::collections::BTreeSet;

use super::AnchorMaps;
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::Scalar;
use crate::solution::Solution;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxVertex {
    pub anchor: usize,
    pub y: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxEdge {
    /// The inducing vertex.
    pub u: usize,
    /// Aux vertices anchored at `n(u)` and `n₂(u)`.
    pub ends: [usize; 2],
}

impl AuxEdge {
    pub fn other(&self, p: usize) -> usize {
        if self.ends[0] == p {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

/// Aux multigraph over pairs `(v, Y)`, restricted to vertices that can lie
/// on a cycle.
#[derive(Clone, Debug, Default)]
pub struct AuxGraph {
    pub vertices: Vec<AuxVertex>,
    pub edges: Vec<AuxEdge>,
    /// Incident edge ids per aux vertex, ascending.
    pub incident: Vec<Vec<usize>>,
}

fn solution_nbrs_w2<W: Scalar>(g: &ConflictGraph<W>, a: &Solution<W>, x: usize, skip: &[usize]) -> W {
    g.neighbors(x)
        .iter()
        .filter(|&&v| a.contains(v) && !skip.contains(&v))
        .fold(W::zero(), |acc, &v| acc + g.weight(v).square())
}

/// The strict per-edge inequality for `u` with `Y1` hung on `n(u)` and
/// `Y2` on `n₂(u)`, multiplied by 2 to stay integral.
pub fn aux_edge_check<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    maps: &AnchorMaps,
    u: usize,
    y1: &[usize],
    y2: &[usize],
) -> bool {
    let (Some(n1), Some(n2)) = (maps.n[u], maps.n2[u]) else {
        return false;
    };
    let two = W::one() + W::one();
    let lhs = two.clone() * g.weight(u).square() + g.total_square(y1) + g.total_square(y2);
    let mut rhs = g.weight(n1).square() + g.weight(n2).square() + two * solution_nbrs_w2(g, a, u, &[n1, n2]);
    for &x in y1 {
        rhs = rhs + solution_nbrs_w2(g, a, x, &[n1]);
    }
    for &x in y2 {
        rhs = rhs + solution_nbrs_w2(g, a, x, &[n2]);
    }
    lhs > rhs
}

/// Disjointness and independence of `{u} ∪ Y1 ∪ Y2` plus the inequality.
pub fn aux_edge_admissible<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    maps: &AnchorMaps,
    u: usize,
    y1: &[usize],
    y2: &[usize],
) -> bool {
    let all: Vec<usize> = std::iter::once(u).chain(y1.iter().copied()).chain(y2.iter().copied()).collect();
    let distinct = all.iter().collect::<BTreeSet<_>>().len() == all.len();
    distinct && g.is_independent(&all) && aux_edge_check(g, a, maps, u, y1, y2)
}

fn independent_subsets<W: Scalar>(g: &ConflictGraph<W>, pool: &[usize], cap: usize) -> Vec<Vec<usize>> {
    fn rec<W: Scalar>(
        g: &ConflictGraph<W>,
        pool: &[usize],
        from: usize,
        cap: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(cur.clone());
        if cur.len() == cap {
            return;
        }
        for i in from..pool.len() {
            if cur.iter().all(|&c| !g.adjacent(c, pool[i])) {
                cur.push(pool[i]);
                rec(g, pool, i + 1, cap, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(g, pool, 0, cap, &mut Vec::new(), &mut out);
    // Larger sets first, then lexicographic.
    out.sort_by(|p, q| q.len().cmp(&p.len()).then_with(|| p.cmp(q)));
    out
}

impl AuxGraph {
    /// Builds the aux graph and trims it to its 2-core.
    ///
    /// Candidates for `Y` at anchor `v` are outside vertices `x` with
    /// `n(x) = v` and `w²(x) > w²(N(x, A) \ {v})`: dropping any other
    /// member from a circular improvement keeps every edge inequality
    /// true, so the restriction never removes the last improvement.
    pub fn build<W: Scalar>(
        g: &ConflictGraph<W>,
        a: &Solution<W>,
        maps: &AnchorMaps,
        y_cap: usize,
        vertex_cap: usize,
        edge_cap: usize,
    ) -> Result<AuxGraph> {
        let inducers = maps.edge_inducers();
        let anchors: BTreeSet<usize> =
            inducers.iter().flat_map(|&u| [maps.n[u].unwrap(), maps.n2[u].unwrap()]).collect();

        let mut vertices = Vec::new();
        let mut slack = Vec::new();
        let mut by_anchor = vec![Vec::new(); g.n()];
        for &v in &anchors {
            let pool: Vec<usize> = (0..g.n())
                .filter(|&x| maps.n[x] == Some(v) && g.weight(x).square() > solution_nbrs_w2(g, a, x, &[v]))
                .collect();
            for y in independent_subsets(g, &pool, y_cap) {
                let s =
                    y.iter().fold(W::zero(), |acc, &x| acc + g.weight(x).square() - solution_nbrs_w2(g, a, x, &[v]));
                by_anchor[v].push(vertices.len());
                vertices.push(AuxVertex { anchor: v, y });
                slack.push(s);
                if vertices.len() > vertex_cap {
                    return Err(Error::budget("aux graph vertices", vertex_cap as u64));
                }
            }
        }

        let max_slack = |v: usize| {
            by_anchor[v].iter().map(|&p| &slack[p]).fold(W::zero(), |m, s| if *s > m { s.clone() } else { m })
        };
        let two = W::one() + W::one();
        let mut edges = Vec::new();
        for &u in &inducers {
            let (n1, n2) = (maps.n[u].unwrap(), maps.n2[u].unwrap());
            let base = two.clone() * g.weight(u).square()
                - g.weight(n1).square()
                - g.weight(n2).square()
                - two.clone() * solution_nbrs_w2(g, a, u, &[n1, n2]);
            if !(base.clone() + max_slack(n1) + max_slack(n2)).positive() {
                continue;
            }
            for &p in &by_anchor[n1] {
                let y1 = &vertices[p].y;
                if y1.iter().any(|&x| x == u || g.adjacent(x, u)) {
                    continue;
                }
                let partial = base.clone() + slack[p].clone();
                for &q in &by_anchor[n2] {
                    let y2 = &vertices[q].y;
                    if !(partial.clone() + slack[q].clone()).positive() {
                        continue;
                    }
                    if y2.iter().any(|&x| x == u || g.adjacent(x, u) || y1.iter().any(|&z| g.adjacent(x, z))) {
                        continue;
                    }
                    edges.push(AuxEdge { u, ends: [p, q] });
                    if edges.len() > edge_cap {
                        return Err(Error::budget("aux graph edges", edge_cap as u64));
                    }
                }
            }
        }
        Ok(Self::two_core(vertices, edges))
    }

    fn two_core(vertices: Vec<AuxVertex>, edges: Vec<AuxEdge>) -> AuxGraph {
        let mut degree = vec![0usize; vertices.len()];
        let mut incident = vec![Vec::new(); vertices.len()];
        for (e, edge) in edges.iter().enumerate() {
            for &p in &edge.ends {
                degree[p] += 1;
                incident[p].push(e);
            }
        }
        let mut alive_v = vec![true; vertices.len()];
        let mut alive_e = vec![true; edges.len()];
        let mut stack: Vec<usize> = (0..vertices.len()).filter(|&p| degree[p] < 2).collect();
        while let Some(p) = stack.pop() {
            if !alive_v[p] {
                continue;
            }
            alive_v[p] = false;
            for &e in &incident[p] {
                if alive_e[e] {
                    alive_e[e] = false;
                    let q = edges[e].other(p);
                    degree[q] -= 1;
                    if alive_v[q] && degree[q] < 2 {
                        stack.push(q);
                    }
                }
            }
        }
        let mut new_id = vec![usize::MAX; vertices.len()];
        let mut kept = Vec::new();
        for (p, v) in vertices.into_iter().enumerate() {
            if alive_v[p] {
                new_id[p] = kept.len();
                kept.push(v);
            }
        }
        let mut h = AuxGraph { incident: vec![Vec::new(); kept.len()], vertices: kept, edges: Vec::new() };
        for (e, edge) in edges.into_iter().enumerate() {
            if alive_e[e] {
                let ends = [new_id[edge.ends[0]], new_id[edge.ends[1]]];
                let id = h.edges.len();
                h.incident[ends[0]].push(id);
                h.incident[ends[1]].push(id);
                h.edges.push(AuxEdge { u: edge.u, ends });
            }
        }
        h
    }
}
