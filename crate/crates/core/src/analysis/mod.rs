//! Certificates for local optima: charges, contributions, the vertex
//! classes of the logarithmic-improvement analysis, and the parameter
//! checks that analysis relies on.
//!
//! For an optimum `A*` and a maximal solution `A`, each `u ∈ A*` picks its
//! heaviest neighbor `n(u)` in `A` (itself when `u ∈ A`) and sends it the
//! charge `w(u) − w(N(u, A))/2`. At a solution no claw improves, the
//! positive charges a vertex receives are at most half its weight, which
//! yields `w(A*) ≤ (d/2)·w(A)`.

pub mod constants;
pub mod improving;
pub mod interval;

pub use constants::{check_constants, AnalysisParams, ConstantCheck};
pub use improving::{bad_vertex_deletion, find_improving_subgraph, Deletion, Multigraph, Subgraph};

use num_traits::{Signed, Zero};
use serde::Serialize;

use self::constants::{MAX_BITS, START_BITS};
use self::interval::{decide_le, decide_lt, Interval};
use crate::circular::build_anchor_maps;
use crate::error::{Error, Result};
use crate::graph::{verify_claw_free, ClawCheck, ConflictGraph};
use crate::scalar::{rational_serde, Rational, Scalar};
use crate::search::find_claw_improvement;
use crate::solution::{verify_solution, Solution};

/// Work limit for the claw-freeness and claw-fixed-point checks run while
/// certifying.
pub const CERT_SEARCH_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    Single,
    Double,
    Payback,
    Good,
    Contributive,
}

/// Per-vertex data for `v ∈ A`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionVertexEntry {
    pub vertex: usize,
    /// Sum of the positive charges sent to `v`.
    #[serde(with = "rational_serde")]
    pub charge_sum: Rational,
    #[serde(with = "rational_serde")]
    pub contr_sum: Rational,
    /// Vertices of `A*` sending `v` a positive charge.
    pub positive_senders: Vec<usize>,
}

/// Per-vertex data for `u ∈ A*`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimumVertexEntry {
    pub vertex: usize,
    /// `n(u)`, the heaviest vertex of `N(u, A)`.
    pub anchor: usize,
    #[serde(with = "rational_serde")]
    pub charge: Rational,
    #[serde(with = "rational_serde")]
    pub contr_to_anchor: Rational,
    /// Empty when classification was not requested or nothing applies.
    pub classes: Vec<VertexClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClassificationStatus {
    /// Every vertex of `A*` is in at least one class.
    Complete,
    /// Some vertices are unclassified, but completeness is only claimed for
    /// claw-fixed solutions with `d ≥ d_δ`, and that hypothesis fails here.
    HypothesisUnmet { unclassified: Vec<usize> },
    /// Unclassified vertices although the hypothesis holds.
    Violated { unclassified: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundFlags {
    /// `w(A*) = Σ w(N(u,A))/2 + Σ charge(u, n(u))`.
    pub charge_identity: bool,
    /// `w²(u) − w²(N(u,A) \ {v}) ≥ 2·charge(u,v)·w(v)` for positive charges.
    pub pointwise_charge: bool,
    /// `contr(u, n(u)) ≥ 2·charge(u, n(u))`.
    pub contribution_covers_charge: bool,
    /// Positive charges into each `v` total at most `w(v)/2`.
    pub charge_bound: bool,
    /// Contributions into each `v` total at most `w(v)`.
    pub contribution_bound: bool,
    /// `Σ w(N(u,A))/2 ≤ ((d−1)/2)·w(A)`; `None` unless `d`-claw freeness was
    /// verified.
    pub neighborhood_bound: Option<bool>,
    /// `w(A*) ≤ (d/2)·w(A)`; `None` when `d` is unknown.
    pub ratio_bound: Option<bool>,
    pub classification: Option<ClassificationStatus>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertReport {
    pub claw_bound: Option<usize>,
    /// Result of the `d`-claw freeness check, `None` if not run or out of
    /// budget.
    pub claw_free: Option<bool>,
    /// Whether no claw improves `w²(A)`, `None` if out of budget.
    pub claw_fixed_point: Option<bool>,
    #[serde(with = "rational_serde")]
    pub solution_weight: Rational,
    #[serde(with = "rational_serde")]
    pub optimum_weight: Rational,
    pub solution: Vec<SolutionVertexEntry>,
    pub optimum: Vec<OptimumVertexEntry>,
    pub flags: BoundFlags,
}

impl CertReport {
    /// Names of the checks that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let f = &self.flags;
        let mut out = Vec::new();
        for (ok, name) in [
            (f.charge_identity, "charge_identity"),
            (f.pointwise_charge, "pointwise_charge"),
            (f.contribution_covers_charge, "contribution_covers_charge"),
            (f.charge_bound, "charge_bound"),
            (f.contribution_bound, "contribution_bound"),
            (f.neighborhood_bound != Some(false), "neighborhood_bound"),
            (f.ratio_bound != Some(false), "ratio_bound"),
            (!matches!(f.classification, Some(ClassificationStatus::Violated { .. })), "classification"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Exact view of `(G, A, A*)` with `n(u)` fixed for every `u ∈ A*`.
pub struct ChargeContext {
    g: ConflictGraph<Rational>,
    a: Solution<Rational>,
    astar: Vec<usize>,
    anchor: Vec<usize>,
    second: Vec<Option<usize>>,
}

impl ChargeContext {
    /// Errors if `A` is not a maximal independent set or `A*` is not
    /// independent.
    pub fn new<W: Scalar>(g: &ConflictGraph<W>, a: &Solution<W>, astar: &[usize]) -> Result<Self> {
        let rg = g.to_rational()?;
        let ra = a.rebase(&rg);
        if !verify_solution(&rg, &ra) {
            return Err(Error::Contract("solution is not independent".into()));
        }
        for &u in astar {
            rg.check_vertex(u)?;
        }
        if !rg.is_independent(astar) {
            return Err(Error::Contract("comparison set is not independent".into()));
        }
        let maps = build_anchor_maps(&rg, &ra)?;
        let mut astar = astar.to_vec();
        astar.sort_unstable();
        astar.dedup();
        let anchor = (0..rg.n()).map(|u| if ra.contains(u) { u } else { maps.n[u].unwrap() }).collect();
        Ok(ChargeContext { g: rg, a: ra, astar, anchor, second: maps.n2 })
    }

    pub fn graph(&self) -> &ConflictGraph<Rational> {
        &self.g
    }

    /// `N(u, A)`, closed: `{u}` when `u ∈ A`.
    pub fn neighborhood(&self, u: usize) -> Vec<usize> {
        if self.a.contains(u) {
            vec![u]
        } else {
            self.a.neighborhood_of(&self.g, &[u])
        }
    }

    pub fn anchor(&self, u: usize) -> usize {
        self.anchor[u]
    }

    pub fn charge(&self, u: usize, v: usize) -> Rational {
        if v != self.anchor[u] {
            return Rational::zero();
        }
        self.g.weight(u) - self.g.total_weight(&self.neighborhood(u)) / Rational::from_integer(2.into())
    }

    /// `max{0, (w²(u) − w²(N(u,A) \ {v}))/w(v)}` for `v ∈ N(u, A)`, else 0.
    pub fn contribution(&self, u: usize, v: usize) -> Rational {
        let nb = self.neighborhood(u);
        if !nb.contains(&v) {
            return Rational::zero();
        }
        let rest: Vec<usize> = nb.into_iter().filter(|&x| x != v).collect();
        let value = (self.g.weight(u).square() - self.g.total_square(&rest)) / self.g.weight(v);
        if value.is_positive() {
            value
        } else {
            Rational::zero()
        }
    }

    fn classes_at(&self, u: usize, p: &AnalysisParams, bits: u32) -> Option<Vec<VertexClass>> {
        let g = &self.g;
        let point = |r: &Rational| Interval::point(r.clone());
        let one = Interval::int(1);
        let two = Interval::int(2);
        let root_ep = Interval::sqrt(&p.eps_prime, bits);
        let root_2ep = Interval::sqrt(&(&p.eps_prime * Rational::from_integer(2.into())), bits);

        let v1 = self.anchor[u];
        let nb = self.neighborhood(u);
        let wu = point(g.weight(u));
        let wv1 = point(g.weight(v1));
        let wn = point(&g.total_weight(&nb));
        let charge = self.charge(u, v1);
        let positive = charge.is_positive();
        let v2 = self.second[u].filter(|_| nb.len() >= 2);

        let in_range = |x: &Interval, lo: &Interval, hi: &Interval| -> Option<bool> {
            Some(decide_le(lo, x)? && decide_le(x, hi)?)
        };
        // w(u)/w(v1) ∈ [1−β, 1+β], scaled by w(v1).
        let near_anchor = |beta: &Interval| in_range(&wu, &(&(&one - beta) * &wv1), &(&(&one + beta) * &wv1));

        let mut out = Vec::new();
        if positive {
            let b = &root_ep;
            if near_anchor(b)? && decide_le(&wn, &(&(&one + b) * &wv1))? {
                out.push(VertexClass::Single);
            }
            if let Some(v2) = v2 {
                let wv2 = point(g.weight(v2));
                if near_anchor(b)?
                    && decide_le(&(&(&one - b) * &wv1), &wv2)?
                    && decide_le(&wv2, &wv1)?
                    && decide_le(&(&(&two - b) * &wv1), &wn)?
                    && decide_lt(&wn, &(&two * &wu))?
                {
                    out.push(VertexClass::Double);
                }
            }
        }
        let ep = point(&p.eps_prime);
        if decide_le(&(&(&two + &ep) * &wu), &wn)? {
            out.push(VertexClass::Payback);
        }
        if let Some(v2) = v2 {
            let b = &root_2ep;
            let wv2 = point(g.weight(v2));
            // w(u)/w(v1) ≤ 1/(1−β) is w(u)·(1−β) ≤ w(v1) since β < 1.
            if decide_le(&(&two * &wu), &wn)?
                && decide_le(&wn, &(&(&two + b) * &wu))?
                && decide_le(&(&(&one - b) * &wv1), &wv2)?
                && decide_le(&(&(&one - b) * &wv1), &wu)?
                && decide_le(&(&wu * &(&one - b)), &wv1)?
            {
                out.push(VertexClass::Good);
            }
        }
        let half_ep = &p.eps_prime / Rational::from_integer(2.into());
        let need = &half_ep * g.weight(u) + Rational::from_integer(2.into()) * charge.max(Rational::zero());
        if self.contribution(u, v1) >= need {
            out.push(VertexClass::Contributive);
        }
        Some(out)
    }

    /// All classes `u` belongs to at the parameters `√ε′` (single, double),
    /// `ε′` (payback), `√(2ε′)` (good) and `ε′/2` (contributive).
    pub fn classify(&self, u: usize, params: &AnalysisParams) -> Result<Vec<VertexClass>> {
        let mut bits = START_BITS;
        loop {
            if let Some(c) = self.classes_at(u, params, bits) {
                return Ok(c);
            }
            if bits >= MAX_BITS {
                return Err(Error::Undecidable { what: format!("classes of vertex {u}"), bits });
            }
            bits *= 2;
        }
    }
}

struct Totals {
    solution: Vec<SolutionVertexEntry>,
    optimum: Vec<OptimumVertexEntry>,
    pointwise_charge: bool,
    contribution_covers_charge: bool,
}

fn tabulate(ctx: &ChargeContext) -> Totals {
    let g = &ctx.g;
    let a_members = ctx.a.members();
    let mut index = vec![usize::MAX; g.n()];
    let mut solution: Vec<SolutionVertexEntry> = a_members
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            index[v] = i;
            SolutionVertexEntry {
                vertex: v,
                charge_sum: Rational::zero(),
                contr_sum: Rational::zero(),
                positive_senders: Vec::new(),
            }
        })
        .collect();
    let two = Rational::from_integer(2.into());
    let mut pointwise_charge = true;
    let mut contribution_covers_charge = true;
    let mut optimum = Vec::with_capacity(ctx.astar.len());
    for &u in &ctx.astar {
        let v = ctx.anchor[u];
        let charge = ctx.charge(u, v);
        let nb = ctx.neighborhood(u);
        for &x in &nb {
            let c = ctx.contribution(u, x);
            solution[index[x]].contr_sum += c;
        }
        let contr = ctx.contribution(u, v);
        if charge.is_positive() {
            let entry = &mut solution[index[v]];
            entry.charge_sum += &charge;
            entry.positive_senders.push(u);
            let rest: Vec<usize> = nb.iter().copied().filter(|&x| x != v).collect();
            pointwise_charge &= g.weight(u).square() - g.total_square(&rest) >= &two * &charge * g.weight(v);
        }
        contribution_covers_charge &= contr >= &two * &charge;
        optimum.push(OptimumVertexEntry { vertex: u, anchor: v, charge, contr_to_anchor: contr, classes: Vec::new() });
    }
    Totals { solution, optimum, pointwise_charge, contribution_covers_charge }
}

/// Charges per `v ∈ A` together with the pointwise checks.
pub fn compute_charges<W: Scalar>(g: &ConflictGraph<W>, a: &Solution<W>, astar: &[usize]) -> Result<CertReport> {
    certify(g, a, astar, None, false)
}

/// Runs every check. `params` enables the vertex classification.
pub fn certify_local_optimum<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    astar: &[usize],
    params: Option<&AnalysisParams>,
) -> Result<CertReport> {
    certify(g, a, astar, params, true)
}

/// Class tags per `u ∈ A*`, in the order of the sorted `A*`.
pub fn classify_vertices<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    astar: &[usize],
    params: &AnalysisParams,
) -> Result<Vec<(usize, Vec<VertexClass>)>> {
    let ctx = ChargeContext::new(g, a, astar)?;
    ctx.astar.iter().map(|&u| Ok((u, ctx.classify(u, params)?))).collect()
}

fn certify<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    astar: &[usize],
    params: Option<&AnalysisParams>,
    searches: bool,
) -> Result<CertReport> {
    let ctx = ChargeContext::new(g, a, astar)?;
    let rg = &ctx.g;
    let mut totals = tabulate(&ctx);
    let two = Rational::from_integer(2.into());

    let solution_weight = ctx.a.total_w().clone();
    let optimum_weight = rg.total_weight(&ctx.astar);
    let half_nb: Rational = ctx.astar.iter().map(|&u| rg.total_weight(&ctx.neighborhood(u)) / &two).sum();
    let all_charges: Rational = totals.optimum.iter().map(|e| e.charge.clone()).sum();
    let charge_identity = optimum_weight == &half_nb + &all_charges;
    let charge_bound = totals.solution.iter().all(|e| e.charge_sum <= rg.weight(e.vertex) / &two);
    let contribution_bound = totals.solution.iter().all(|e| &e.contr_sum <= rg.weight(e.vertex));

    let d = rg.claw_bound();
    let ratio_bound = d.map(|d| optimum_weight <= Rational::from_integer(d.into()) * &solution_weight / &two);
    let claw_free = match (d, searches) {
        (Some(d), true) => match verify_claw_free(rg, d, CERT_SEARCH_BUDGET) {
            Ok(ClawCheck::Free) => Some(true),
            Ok(ClawCheck::Claw { .. }) => Some(false),
            Err(Error::Budget { .. }) => None,
            Err(e) => return Err(e),
        },
        _ => None,
    };
    let neighborhood_bound = match (d, claw_free) {
        (Some(d), Some(true)) => Some(half_nb <= Rational::from_integer((d - 1).into()) * &solution_weight / &two),
        _ => None,
    };
    let claw_fixed_point = if searches {
        match find_claw_improvement(rg, &ctx.a, CERT_SEARCH_BUDGET) {
            Ok(found) => Some(found.is_none()),
            Err(Error::Budget { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let classification = match params {
        None => None,
        Some(p) => {
            let mut unclassified = Vec::new();
            for entry in &mut totals.optimum {
                entry.classes = ctx.classify(entry.vertex, p)?;
                if entry.classes.is_empty() {
                    unclassified.push(entry.vertex);
                }
            }
            let hypothesis =
                claw_fixed_point == Some(true) && d.is_some_and(|d| Rational::from_integer(d.into()) >= p.d_delta);
            Some(if unclassified.is_empty() {
                ClassificationStatus::Complete
            } else if hypothesis {
                ClassificationStatus::Violated { unclassified }
            } else {
                ClassificationStatus::HypothesisUnmet { unclassified }
            })
        }
    };

    Ok(CertReport {
        claw_bound: d,
        claw_free,
        claw_fixed_point,
        solution_weight,
        optimum_weight,
        solution: totals.solution,
        optimum: totals.optimum,
        flags: BoundFlags {
            charge_identity,
            pointwise_charge: totals.pointwise_charge,
            contribution_covers_charge: totals.contribution_covers_charge,
            charge_bound,
            contribution_bound,
            neighborhood_bound,
            ratio_bound,
            classification,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ctx(weights: Vec<i64>, edges: &[(usize, usize)], a: &[usize], astar: &[usize]) -> ChargeContext {
        let g = ConflictGraph::new(weights, edges).unwrap();
        let a = Solution::from_members(&g, a).unwrap();
        ChargeContext::new(&g, &a, astar).unwrap()
    }

    #[test]
    fn single_neighbor_charge_and_contribution() {
        let c = ctx(vec![3, 2], &[(0, 1)], &[1], &[0]);
        assert_eq!(c.charge(0, 1), q(2, 1));
        assert_eq!(c.contribution(0, 1), q(9, 2));
    }

    #[test]
    fn shared_vertex_charges_half_its_weight() {
        let c = ctx(vec![5, 1], &[(0, 1)], &[0], &[0]);
        assert_eq!(c.anchor(0), 0);
        assert_eq!(c.charge(0, 0), q(5, 2));
        assert_eq!(c.contribution(0, 0), q(5, 1));
    }

    #[test]
    fn balanced_pair_sends_nothing() {
        let c = ctx(vec![1, 1, 1], &[(0, 1), (0, 2)], &[1, 2], &[0]);
        assert_eq!(c.charge(0, c.anchor(0)), q(0, 1));
        assert_eq!(c.contribution(0, 1), q(0, 1));
    }

    #[test]
    fn classes_on_small_cases() {
        let p = AnalysisParams::new(q(1, 2)).unwrap();
        let single = ctx(vec![1, 1], &[(0, 1)], &[1], &[0]);
        // Charge 1/2 > 0, ratio 1, w(N) = 1.
        assert!(single.classify(0, &p).unwrap().contains(&VertexClass::Single));

        let good = ctx(vec![1, 1, 1], &[(0, 1), (0, 2)], &[1, 2], &[0]);
        let classes = good.classify(0, &p).unwrap();
        assert!(classes.contains(&VertexClass::Good));
        assert!(!classes.contains(&VertexClass::Double));

        let payback = ctx(vec![1, 1, 1, 1], &[(0, 1), (0, 2), (0, 3)], &[1, 2, 3], &[0]);
        assert!(payback.classify(0, &p).unwrap().contains(&VertexClass::Payback));
    }

    #[test]
    fn optimum_as_incumbent_passes() {
        let g = ConflictGraph::new(vec![3i64, 1, 3], &[(0, 1), (1, 2)]).unwrap();
        let a = Solution::from_members(&g, &[0, 2]).unwrap();
        let r = certify_local_optimum(&g, &a, &[0, 2], None).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(r.solution[0].charge_sum, q(3, 2));
        assert_eq!(r.flags.ratio_bound, None);
    }

    #[test]
    fn non_maximal_solution_is_rejected() {
        let g = ConflictGraph::new(vec![1i64, 1, 1], &[(0, 1)]).unwrap();
        let a = Solution::from_members(&g, &[0]).unwrap();
        assert!(matches!(compute_charges(&g, &a, &[1, 2]), Err(Error::Contract(_))));
    }

    #[test]
    fn residual_claw_breaks_contribution_bound() {
        // Star with a light center: two talons of weight 2 improve w².
        let g = ConflictGraph::new(vec![2i64, 2, 2], &[(0, 1), (0, 2)]).unwrap().with_claw_bound(Some(3));
        let a = Solution::from_members(&g, &[0]).unwrap();
        let r = certify_local_optimum(&g, &a, &[1, 2], None).unwrap();
        assert!(!r.flags.contribution_bound);
        assert_eq!(r.claw_fixed_point, Some(false));
        assert!(r.flags.charge_identity && r.flags.pointwise_charge);
    }
}
