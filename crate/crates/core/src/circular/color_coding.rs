use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{assemble, AnchorMaps, AuxCycle, AuxGraph, CircularOutcome, ColorCodingParams};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::{floor_scaled_log, Rational, Scalar};
use crate::solution::Solution;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredEdge {
    pub ends: [usize; 2],
    pub colors: BitSet,
}

/// Multigraph whose vertices and edges carry color sets drawn from
/// `0..width`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColoredMultigraph {
    pub width: usize,
    pub vertex_colors: Vec<BitSet>,
    pub edges: Vec<ColoredEdge>,
}

impl ColoredMultigraph {
    pub fn new(width: usize, num_vertices: usize) -> Self {
        ColoredMultigraph { width, vertex_colors: vec![BitSet::new(width); num_vertices], edges: Vec::new() }
    }

    pub fn add_edge(&mut self, a: usize, b: usize, colors: impl IntoIterator<Item = usize>) -> usize {
        self.edges.push(ColoredEdge { ends: [a, b], colors: BitSet::from_iter(self.width, colors) });
        self.edges.len() - 1
    }

    /// Edges whose own colors and both endpoint colors are pairwise
    /// disjoint, listed per vertex.
    fn usable_incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_colors.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            let [a, b] = edge.ends;
            let (ca, cb) = (&self.vertex_colors[a], &self.vertex_colors[b]);
            if a != b && !edge.colors.intersects(ca) && !edge.colors.intersects(cb) && !ca.intersects(cb) {
                inc[a].push(e);
                inc[b].push(e);
            }
        }
        inc
    }

    fn other(&self, e: usize, p: usize) -> usize {
        let [a, b] = self.edges[e].ends;
        if a == p {
            b
        } else {
            a
        }
    }

    fn check_vertex_colors(&self) -> Result<()> {
        match self.vertex_colors.iter().position(BitSet::is_empty) {
            Some(p) => Err(Error::Contract(format!("colored vertex {p} has no color"))),
            None => Ok(()),
        }
    }
}

/// A colorful cycle: `vertices[i]` and `vertices[i+1]` (cyclically) are
/// joined by `edges[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorfulCycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// A true entry of the path table: a colorful path from `start` to `end`
/// with `len` edges whose vertex and edge colors union to `colors`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathKey {
    pub start: usize,
    pub end: usize,
    pub colors: BitSet,
    pub len: usize,
}

type Level = BTreeMap<(usize, BitSet), Option<(usize, usize)>>;

/// Reachable states ending at `target`, level by level. States are
/// `(start, colors)` with a backlink `(next vertex, edge)`.
struct PathDp<'a> {
    h: &'a ColoredMultigraph,
    inc: Vec<Vec<usize>>,
    state_cap: usize,
}

impl PathDp<'_> {
    fn extend(&self, prev: &Level, min_vertex: usize, states: &mut usize) -> Result<Level> {
        let mut next = Level::new();
        for (v, colors) in prev.keys() {
            for &e in &self.inc[*v] {
                let s = self.h.other(e, *v);
                if s < min_vertex {
                    continue;
                }
                let ec = &self.h.edges[e].colors;
                let sc = &self.h.vertex_colors[s];
                if ec.intersects(colors) || sc.intersects(colors) {
                    continue;
                }
                let key = (s, colors.union(ec).union(sc));
                if let Entry::Vacant(slot) = next.entry(key) {
                    *states += 1;
                    if *states > self.state_cap {
                        return Err(Error::budget("colorful path states", self.state_cap as u64));
                    }
                    slot.insert(Some((*v, e)));
                }
            }
        }
        Ok(next)
    }

    fn trace_back(&self, levels: &[Level], mut s: usize, mut colors: BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        for level in levels.iter().rev() {
            let Some(Some((v, e))) = level.get(&(s, colors.clone())) else {
                break;
            };
            colors = colors.difference(&self.h.edges[*e].colors).difference(&self.h.vertex_colors[s]);
            edges.push(*e);
            vertices.push(*v);
            s = *v;
        }
        (vertices, edges)
    }
}

/// Colorful cycle of length `3..=max_len`, found with the path dynamic
/// program rooted at the cycle's smallest vertex. Every vertex must carry
/// at least one color so that colorful paths are simple.
pub fn colorful_cycle_dp(h: &ColoredMultigraph, max_len: usize, state_cap: usize) -> Result<Option<ColorfulCycle>> {
    h.check_vertex_colors()?;
    let dp = PathDp { h, inc: h.usable_incidence(), state_cap };
    for t in 0..h.vertex_colors.len() {
        let mut states = 1;
        let mut levels: Vec<Level> = vec![Level::from([((t, h.vertex_colors[t].clone()), None)])];
        for i in 1..max_len {
            let next = dp.extend(&levels[i - 1], t + 1, &mut states)?;
            if next.is_empty() {
                break;
            }
            levels.push(next);
            if i < 2 {
                continue;
            }
            for (s, colors) in levels[i].keys() {
                for &e in &dp.inc[*s] {
                    if h.other(e, *s) == t && !h.edges[e].colors.intersects(colors) {
                        let (vertices, mut edges) = dp.trace_back(&levels, *s, colors.clone());
                        edges.push(e);
                        return Ok(Some(ColorfulCycle { vertices, edges }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Every true `Path(s, t, C, i)` with `i ≤ max_edges`.
pub fn colorful_path_table(h: &ColoredMultigraph, max_edges: usize, state_cap: usize) -> Result<BTreeSet<PathKey>> {
    h.check_vertex_colors()?;
    let dp = PathDp { h, inc: h.usable_incidence(), state_cap };
    let mut table = BTreeSet::new();
    for t in 0..h.vertex_colors.len() {
        let mut states = 1;
        let mut level: Level = Level::from([((t, h.vertex_colors[t].clone()), None)]);
        for i in 0..=max_edges {
            if i > 0 {
                level = dp.extend(&level, 0, &mut states)?;
            }
            for (s, colors) in level.keys() {
                table.insert(PathKey { start: *s, end: t, colors: colors.clone(), len: i });
            }
        }
    }
    Ok(table)
}

/// `t!/((t−m)!·tᵐ)`: probability that a uniform coloring with `t` colors
/// is injective on `m` fixed elements.
pub fn per_trial_success(t: usize, m: usize) -> f64 {
    if m > t {
        return 0.0;
    }
    (0..m).map(|i| (t - i) as f64 / t as f64).product()
}

/// Colorings needed so that an improvement touching `m` elements is
/// missed with probability at most `fail`.
pub fn default_repetitions(t: usize, m: usize, fail: f64) -> usize {
    let p = per_trial_success(t, m);
    if p >= 1.0 {
        return 1;
    }
    if p <= 0.0 {
        return usize::MAX;
    }
    ((1.0 / fail).ln() / -(1.0 - p).ln()).ceil().max(1.0) as usize
}

/// `⌊4·(k+1)·k·log(num_sets)⌋`, at least 1.
pub fn default_t(k: usize, num_sets: usize, base: u32) -> usize {
    let c = Rational::from_integer((4 * (k + 1) * k).into());
    floor_scaled_log(&c, num_sets, base).max(1)
}

fn two_cycle<W: Scalar>(g: &ConflictGraph<W>, h: &AuxGraph) -> Option<AuxCycle> {
    let mut parallel: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
    for (e, edge) in h.edges.iter().enumerate() {
        let mut key = edge.ends;
        key.sort_unstable();
        parallel.entry(key).or_default().push(e);
    }
    for ([p, q], list) in parallel {
        for (i, &e1) in list.iter().enumerate() {
            for &e2 in &list[i + 1..] {
                let (u1, u2) = (h.edges[e1].u, h.edges[e2].u);
                if u1 != u2 && !g.adjacent(u1, u2) {
                    let start = h.edges[e1].ends[0];
                    let other = if start == p { q } else { p };
                    return Some(AuxCycle { vertices: vec![start, other], edges: vec![e1, e2] });
                }
            }
        }
    }
    None
}

/// Randomized color coding over the packing universe: exact 2-cycle scan,
/// then repeated random colorings with the colorful cycle program.
pub fn run_color_coding<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    _maps: &AnchorMaps,
    h: &AuxGraph,
    params: &ColorCodingParams,
    rng: &mut ChaCha8Rng,
) -> Result<CircularOutcome> {
    let sets = g.sets().ok_or_else(|| Error::Contract("color coding needs set structure".into()))?;
    let max_len = params.cycle_len_cap(g.n());
    if let Some(c) = two_cycle(g, h) {
        return Ok(CircularOutcome::Found(assemble(g, a, h, &c)?));
    }
    if max_len < 3 || h.edges.is_empty() {
        return Ok(CircularOutcome::NotFound { complete: true });
    }

    let used: BTreeSet<usize> = sets.iter().flatten().copied().collect();
    let rank: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let k = g.claw_bound().map_or_else(|| sets.iter().map(Vec::len).max().unwrap_or(1), |d| d.saturating_sub(1));
    let t = params.t.unwrap_or_else(|| default_t(k.max(1), g.n(), params.log_base));
    let identity = t >= used.len();
    let reps = if identity {
        1
    } else {
        params.repetitions.unwrap_or_else(|| default_repetitions(t, t.min(params.target_elements), params.fail_prob))
    };
    let colors = if identity { used.len() } else { t };
    let width = colors + g.n();

    for _ in 0..reps {
        let f: Vec<usize> =
            if identity { (0..used.len()).collect() } else { (0..used.len()).map(|_| rng.gen_range(0..t)).collect() };
        let color_of = |v: usize| sets[v].iter().map(|e| f[rank[e]]).collect::<Vec<_>>();
        let mut cg = ColoredMultigraph::new(width, h.vertices.len());
        for (p, vertex) in h.vertices.iter().enumerate() {
            let mut c = BitSet::new(width);
            for &x in &vertex.y {
                for col in color_of(x) {
                    c.insert(col);
                }
            }
            // A private token per anchor keeps anchors distinct on a cycle.
            c.insert(colors + vertex.anchor);
            cg.vertex_colors[p] = c;
        }
        for edge in &h.edges {
            cg.add_edge(edge.ends[0], edge.ends[1], color_of(edge.u));
        }
        if let Some(cycle) = colorful_cycle_dp(&cg, max_len, params.dp_state_cap)? {
            let aux = AuxCycle { vertices: cycle.vertices, edges: cycle.edges };
            return Ok(CircularOutcome::Found(assemble(g, a, h, &aux)?));
        }
    }
    Ok(CircularOutcome::NotFound { complete: identity })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(edge_colors: [&[usize]; 3]) -> ColoredMultigraph {
        let mut h = ColoredMultigraph::new(16, 3);
        for p in 0..3 {
            h.vertex_colors[p] = BitSet::from_iter(16, [p]);
        }
        h.add_edge(0, 1, edge_colors[0].iter().copied());
        h.add_edge(1, 2, edge_colors[1].iter().copied());
        h.add_edge(2, 0, edge_colors[2].iter().copied());
        h
    }

    #[test]
    fn disjoint_triangle_is_found() {
        let h = triangle([&[3], &[4], &[5]]);
        let c = colorful_cycle_dp(&h, 3, 1000).unwrap().unwrap();
        assert_eq!(c.vertices.len(), 3);
        assert_eq!(c.edges.len(), 3);
    }

    #[test]
    fn shared_edge_color_blocks() {
        let h = triangle([&[3], &[3], &[5]]);
        assert_eq!(colorful_cycle_dp(&h, 3, 1000).unwrap(), None);
        // Too short a length cap also blocks.
        assert_eq!(colorful_cycle_dp(&triangle([&[3], &[4], &[5]]), 2, 1000).unwrap(), None);
    }

    #[test]
    fn colorless_vertex_is_rejected() {
        let h = ColoredMultigraph::new(4, 2);
        assert!(colorful_cycle_dp(&h, 3, 10).is_err());
    }

    #[test]
    fn success_probability_and_repetitions() {
        assert_eq!(per_trial_success(4, 2), 0.75);
        assert_eq!(per_trial_success(3, 4), 0.0);
        let p = per_trial_success(32, 8);
        assert!((p - 0.385_7).abs() < 1e-3, "{p}");
        assert_eq!(default_repetitions(32, 8, 1e-3), 15);
        assert_eq!(default_repetitions(8, 1, 1e-3), 1);
    }

    #[test]
    fn default_color_count() {
        // 4·4·3·log2(16) = 192.
        assert_eq!(default_t(3, 16, 2), 192);
        assert_eq!(default_t(3, 1, 2), 1);
    }
}
