//! Circular improvements: short cycles over the solution whose edges are
//! induced by outside vertices with two solution neighbors, padded with
//! per-anchor sets `Y_v`.

mod aux_graph;
mod color_coding;
mod exhaustive;

pub use aux_graph::{aux_edge_admissible, aux_edge_check, AuxEdge, AuxGraph, AuxVertex};
pub use color_coding::{
    colorful_cycle_dp, colorful_path_table, default_repetitions, default_t, per_trial_success, run_color_coding,
    ColoredEdge, ColoredMultigraph, ColorfulCycle, PathKey,
};
pub use exhaustive::exhaustive_cycle_search;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::{floor_scaled_log, Rational, Scalar};
use crate::solution::{CircularEvidence, Improvement, ImprovementKind, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircularMode {
    /// Color coding over the universe of a set packing instance. Plain
    /// graphs fall back to the exhaustive search.
    Randomized,
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct ColorCodingParams {
    pub mode: CircularMode,
    /// Number of colors; defaults to `⌊4(k+1)k·log|S|⌋`.
    pub t: Option<usize>,
    /// Colorings tried; defaults to the count reaching `fail_prob` for an
    /// improvement touching `target_elements` elements.
    pub repetitions: Option<usize>,
    /// Extra cap on the cycle length beyond `⌊4·log|V|⌋`.
    pub max_cycle_len: Option<usize>,
    /// Cap on `|Y|` per aux vertex, on top of `d − 1`.
    pub y_cap: usize,
    pub fail_prob: f64,
    pub target_elements: usize,
    pub log_base: u32,
    pub aux_vertex_cap: usize,
    pub aux_edge_cap: usize,
    pub dp_state_cap: usize,
    pub search_budget: u64,
}

impl Default for ColorCodingParams {
    fn default() -> Self {
        ColorCodingParams {
            mode: CircularMode::Randomized,
            t: None,
            repetitions: None,
            max_cycle_len: None,
            y_cap: 3,
            fail_prob: 1e-3,
            target_elements: 8,
            log_base: 2,
            aux_vertex_cap: 200_000,
            aux_edge_cap: 2_000_000,
            dp_state_cap: 4_000_000,
            search_budget: 20_000_000,
        }
    }
}

impl ColorCodingParams {
    pub fn exhaustive() -> Self {
        ColorCodingParams { mode: CircularMode::Exhaustive, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Contract(m.to_string()));
        if self.t == Some(0) {
            return bad("color count t must be at least 1");
        }
        if self.repetitions == Some(0) {
            return bad("repetitions must be at least 1");
        }
        if self.max_cycle_len.is_some_and(|l| l < 2) {
            return bad("maximum cycle length must be at least 2");
        }
        if !(self.fail_prob > 0.0 && self.fail_prob < 1.0) {
            return bad("failure probability must lie in (0, 1)");
        }
        if self.log_base < 2 {
            return bad("log base must be at least 2");
        }
        Ok(())
    }

    /// `min(d − 1, y_cap)`, or `y_cap` when `d` is unknown.
    pub fn effective_y_cap<W: Scalar>(&self, g: &ConflictGraph<W>) -> usize {
        match g.claw_bound() {
            Some(d) => self.y_cap.min(d.saturating_sub(1)),
            None => self.y_cap,
        }
    }

    /// `min(⌊4·log|V|⌋, max_cycle_len)`.
    pub fn cycle_len_cap(&self, n: usize) -> usize {
        let by_log = floor_scaled_log(&Rational::from_integer(4.into()), n, self.log_base);
        self.max_cycle_len.map_or(by_log, |l| l.min(by_log))
    }

    /// Whether the `Y` cap still admits every set of size `d − 1`.
    fn y_cap_is_lossless<W: Scalar>(&self, g: &ConflictGraph<W>) -> bool {
        g.claw_bound().is_some_and(|d| self.y_cap + 1 >= d)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CircularOutcome {
    Found(Improvement),
    /// `complete` is true when the search was exhaustive over the aux
    /// graph and no cap dropped candidates.
    NotFound {
        complete: bool,
    },
    /// A resource cap stopped the search.
    Incomplete(String),
}

/// Heaviest and second heaviest solution neighbors of every outside
/// vertex, lowest id on ties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorMaps {
    pub n: Vec<Option<usize>>,
    pub n2: Vec<Option<usize>>,
}

impl AnchorMaps {
    /// Vertices with at least two solution neighbors, ascending.
    pub fn edge_inducers(&self) -> Vec<usize> {
        (0..self.n2.len()).filter(|&u| self.n2[u].is_some()).collect()
    }
}

pub fn build_anchor_maps<W: Scalar>(g: &ConflictGraph<W>, a: &Solution<W>) -> Result<AnchorMaps> {
    let mut n = vec![None; g.n()];
    let mut n2 = vec![None; g.n()];
    for u in (0..g.n()).filter(|&u| !a.contains(u)) {
        let mut best: Option<usize> = None;
        let mut second: Option<usize> = None;
        for &v in g.neighbors(u).iter().filter(|&&v| a.contains(v)) {
            // Neighbors arrive in ascending id order, so strict comparisons
            // keep the lowest id among equal weights.
            match best {
                None => best = Some(v),
                Some(b) if g.weight(v) > g.weight(b) => {
                    second = best;
                    best = Some(v);
                }
                Some(_) => {
                    if second.is_none_or(|s| g.weight(v) > g.weight(s)) {
                        second = Some(v);
                    }
                }
            }
        }
        if best.is_none() {
            return Err(Error::Contract(format!("vertex {u} has no neighbor in the solution")));
        }
        n[u] = best;
        n2[u] = second;
    }
    Ok(AnchorMaps { n, n2 })
}

/// Searches for a circular improvement of `w²(A)`.
pub fn find_circular_improvement<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    maps: &AnchorMaps,
    params: &ColorCodingParams,
    rng: &mut ChaCha8Rng,
) -> Result<CircularOutcome> {
    params.validate()?;
    let max_len = params.cycle_len_cap(g.n());
    if max_len < 2 {
        return Ok(CircularOutcome::NotFound { complete: true });
    }
    let h = match AuxGraph::build(g, a, maps, params.effective_y_cap(g), params.aux_vertex_cap, params.aux_edge_cap) {
        Ok(h) => h,
        Err(Error::Budget { what, .. }) => return Ok(CircularOutcome::Incomplete(what)),
        Err(e) => return Err(e),
    };
    let lossless = params.y_cap_is_lossless(g);
    let outcome = if params.mode == CircularMode::Randomized && g.sets().is_some() {
        run_color_coding(g, a, maps, &h, params, rng)?
    } else {
        match exhaustive_cycle_search(g, &h, max_len, params.search_budget) {
            Ok(Some(found)) => CircularOutcome::Found(assemble(g, a, &h, &found)?),
            Ok(None) => CircularOutcome::NotFound { complete: true },
            Err(Error::Budget { what, .. }) => CircularOutcome::Incomplete(what),
            Err(e) => return Err(e),
        }
    };
    Ok(match outcome {
        CircularOutcome::Found(imp) => {
            validate_circular(g, a, maps, &imp, max_len)?;
            CircularOutcome::Found(imp)
        }
        CircularOutcome::NotFound { complete } => CircularOutcome::NotFound { complete: complete && lossless },
        other => other,
    })
}

/// A cycle in the aux graph as parallel lists: `vertices[i]` and
/// `vertices[i+1]` (cyclically) are joined by `edges[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxCycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Turns an aux-graph cycle into an improvement `X = U ∪ ⋃ Y`.
pub fn assemble<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    h: &AuxGraph,
    cycle: &AuxCycle,
) -> Result<Improvement> {
    let u: Vec<usize> = cycle.edges.iter().map(|&e| h.edges[e].u).collect();
    let anchors: Vec<usize> = cycle.vertices.iter().map(|&p| h.vertices[p].anchor).collect();
    let y: BTreeMap<usize, Vec<usize>> =
        cycle.vertices.iter().map(|&p| (h.vertices[p].anchor, h.vertices[p].y.clone())).collect();
    let mut x: Vec<usize> = u.iter().copied().chain(y.values().flatten().copied()).collect();
    x.sort_unstable();
    let before = x.len();
    x.dedup();
    if x.len() != before {
        return Err(Error::Contract("aux cycle reuses a vertex".into()));
    }
    Ok(Improvement::new(g, a, x, ImprovementKind::Circular(CircularEvidence { u, cycle: anchors, y })))
}

fn w2r<W: Scalar>(g: &ConflictGraph<W>, v: usize) -> Rational {
    let r = g.weight(v).to_rational().unwrap_or_default();
    &r * &r
}

fn w2r_sum<'a, W: Scalar>(g: &ConflictGraph<W>, set: impl IntoIterator<Item = &'a usize>) -> Rational {
    set.into_iter().fold(Rational::zero(), |acc, &v| acc + w2r(g, v))
}

fn solution_nbrs_except<W: Scalar>(g: &ConflictGraph<W>, a: &Solution<W>, x: usize, skip: &[usize]) -> Vec<usize> {
    g.neighbors(x).iter().copied().filter(|&v| a.contains(v) && !skip.contains(&v)).collect()
}

/// Re-checks every clause of the circular definition for `imp`, then the
/// summation chain showing `w²(X) > w²(N(X, A))`. Runs in exact rationals.
pub fn validate_circular<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    maps: &AnchorMaps,
    imp: &Improvement,
    max_len: usize,
) -> Result<()> {
    let fail = |m: String| Err(Error::Contract(format!("invalid circular improvement: {m}")));
    imp.validate(g, a)?;
    let ImprovementKind::Circular(ev) = &imp.kind else {
        return fail("not marked circular".into());
    };
    let x: BTreeSet<usize> = imp.added.iter().copied().collect();
    let len = ev.u.len();
    if len < 2 || len != ev.cycle.len() {
        return fail(format!("cycle has {len} edges and {} anchors", ev.cycle.len()));
    }
    if len > max_len {
        return fail(format!("|U| = {len} exceeds {max_len}"));
    }
    if ev.u.iter().collect::<BTreeSet<_>>().len() != len || ev.u.iter().any(|u| !x.contains(u)) {
        return fail("U is not a set of members of X".into());
    }
    if ev.cycle.iter().collect::<BTreeSet<_>>().len() != len || ev.cycle.iter().any(|&v| !a.contains(v)) {
        return fail("cycle anchors are not distinct members of A".into());
    }
    for (i, &u) in ev.u.iter().enumerate() {
        let (Some(n1), Some(n2)) = (maps.n[u], maps.n2[u]) else {
            return fail(format!("{u} has fewer than two neighbors in A"));
        };
        let (p, q) = (ev.cycle[i], ev.cycle[(i + 1) % len]);
        if !((p == n1 && q == n2) || (p == n2 && q == n1)) {
            return fail(format!("edge of {u} does not join consecutive anchors"));
        }
    }
    let u_set: BTreeSet<usize> = ev.u.iter().copied().collect();
    let mut y_actual: BTreeMap<usize, Vec<usize>> = ev.cycle.iter().map(|&v| (v, Vec::new())).collect();
    for &xv in x.difference(&u_set) {
        let anchor = maps.n[xv].expect("outside vertices have an anchor");
        match y_actual.get_mut(&anchor) {
            Some(list) => list.push(xv),
            None => return fail(format!("{xv} is anchored off the cycle")),
        }
    }
    if y_actual != ev.y {
        return fail("recorded Y sets differ from the anchor partition".into());
    }
    if let Some(d) = g.claw_bound() {
        if y_actual.values().any(|y| y.len() + 1 > d) {
            return fail("some Y_v exceeds d - 1".into());
        }
    }

    // Per-edge strict inequality, doubled.
    let y_excess = |v: usize| -> Rational {
        y_actual[&v].iter().map(|&xv| w2r_sum(g, &solution_nbrs_except(g, a, xv, &[v]))).sum()
    };
    let mut lhs_total = Rational::zero();
    let mut rhs_total = Rational::zero();
    for &u in &ev.u {
        let (n1, n2) = (maps.n[u].unwrap(), maps.n2[u].unwrap());
        let lhs =
            w2r(g, u) * Rational::from_integer(2.into()) + w2r_sum(g, &y_actual[&n1]) + w2r_sum(g, &y_actual[&n2]);
        let rest = w2r_sum(g, &solution_nbrs_except(g, a, u, &[n1, n2]));
        let rhs = w2r(g, n1) + w2r(g, n2) + rest * Rational::from_integer(2.into()) + y_excess(n1) + y_excess(n2);
        if lhs <= rhs {
            return fail(format!("edge inequality fails for {u}"));
        }
        lhs_total += lhs;
        rhs_total += rhs;
    }

    // Chain: 2w²(X) = Σ lhs; Σ rhs regroups per anchor; then ≥ 2w²(N(X,A)).
    let two = Rational::from_integer(2.into());
    if w2r_sum(g, &x) * &two != lhs_total {
        return fail("w²(X) does not match the summed edge left sides".into());
    }
    let regrouped: Rational = ev.cycle.iter().map(|&v| w2r(g, v) + y_excess(v)).sum::<Rational>()
        + ev.u
            .iter()
            .map(|&u| w2r_sum(g, &solution_nbrs_except(g, a, u, &[maps.n[u].unwrap(), maps.n2[u].unwrap()])))
            .sum::<Rational>();
    if regrouped.clone() * &two != rhs_total {
        return fail("anchors do not occur exactly twice in the edge right sides".into());
    }
    if regrouped < w2r_sum(g, &imp.removed) {
        return fail("regrouped bound is below w²(N(X, A))".into());
    }
    Ok(())
}
