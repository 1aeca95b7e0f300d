//! Exact maximum weight independent set and exhaustive improvement search
//! for small graphs.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::{Rational, Scalar};
use crate::solution::{Improvement, ImprovementKind, Solution};

pub const DEFAULT_ORACLE_MAX_N: usize = 40;
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub max_n: usize,
    pub node_budget: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { max_n: DEFAULT_ORACLE_MAX_N, node_budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult<W> {
    pub best: Solution<W>,
    pub optimum_w: W,
    pub nodes_explored: u64,
}

struct Bnb<'a, W> {
    g: &'a ConflictGraph<W>,
    closed: Vec<BitSet>,
    best: Vec<usize>,
    best_w: W,
    nodes: u64,
    budget: u64,
}

impl<W: Scalar> Bnb<'_, W> {
    fn search(&mut self, remaining: &BitSet, chosen: &mut Vec<usize>, chosen_w: W) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "exact search nodes".into(),
                limit: self.budget,
                best: self.best.clone(),
            });
        }
        let rest_w = remaining.iter().fold(W::zero(), |acc, v| acc + self.g.weight(v).clone());
        if chosen_w.clone() + rest_w.clone() <= self.best_w {
            return Ok(());
        }

        // Branch vertex: maximum degree inside `remaining`, lowest id on ties.
        let mut pick = None;
        let mut pick_deg = 0;
        for v in remaining.iter() {
            let deg = self.g.neighbors(v).iter().filter(|&&u| remaining.contains(u)).count();
            if deg > pick_deg {
                pick = Some(v);
                pick_deg = deg;
            }
        }

        let Some(v) = pick else {
            // Edgeless remainder: take everything.
            let total = chosen_w + rest_w;
            if total > self.best_w {
                let mut all = chosen.clone();
                all.extend(remaining.iter());
                all.sort_unstable();
                self.best = all;
                self.best_w = total;
            }
            return Ok(());
        };

        chosen.push(v);
        let with = remaining.difference(&self.closed[v]);
        self.search(&with, chosen, chosen_w.clone() + self.g.weight(v).clone())?;
        chosen.pop();

        let mut without = remaining.clone();
        without.remove(v);
        self.search(&without, chosen, chosen_w)
    }
}

/// Branch and bound over the maximum-degree vertex; the bound is the
/// current weight plus all remaining weight.
pub fn exact_mwis<W: Scalar>(g: &ConflictGraph<W>, opts: OracleOptions) -> Result<OracleResult<W>> {
    let n = g.n();
    if n > opts.max_n {
        return Err(Error::Contract(format!("oracle limited to {} vertices, got {n}", opts.max_n)));
    }
    let closed = (0..n).map(|v| BitSet::from_iter(n, g.neighbors(v).iter().copied().chain([v]))).collect();
    let mut bnb = Bnb { g, closed, best: Vec::new(), best_w: W::zero(), nodes: 0, budget: opts.node_budget };
    bnb.search(&BitSet::from_iter(n, 0..n), &mut Vec::new(), W::zero())?;
    let best = Solution::from_members(g, &bnb.best)?;
    Ok(OracleResult { optimum_w: best.total_w().clone(), best, nodes_explored: bnb.nodes })
}

/// Exponent applied to weights when measuring an improvement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Power(Rational),
    /// Cardinality, i.e. every weight counts as 1.
    Unit,
}

impl Exponent {
    /// Rejects `α = 0`; use [`Exponent::Unit`] for cardinality.
    pub fn power(alpha: Rational) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::Contract("exponent 0 is ambiguous; use unit weights instead".into()));
        }
        Ok(Exponent::Power(alpha))
    }

    pub fn squared() -> Self {
        Exponent::Power(Rational::from_integer(2.into()))
    }
}

/// Relative tolerance for comparisons under non-integer exponents.
pub const POWER_TOLERANCE: f64 = 1.0 / (1u64 << 40) as f64;

/// Per-vertex `w^α`, exact for integer exponents.
#[derive(Clone, Debug)]
pub(crate) enum PoweredWeights {
    Exact(Vec<Rational>),
    Approx(Vec<f64>),
}

impl PoweredWeights {
    pub(crate) fn new<W: Scalar>(g: &ConflictGraph<W>, exp: &Exponent) -> Result<Self> {
        let rational = |v: usize| {
            g.weight(v).to_rational().ok_or_else(|| Error::InvalidInstance(format!("weight of {v} not finite")))
        };
        match exp {
            Exponent::Unit => Ok(PoweredWeights::Exact(vec![Rational::one(); g.n()])),
            Exponent::Power(a) if a.is_integer() => {
                let e = a.to_integer();
                let mag = e.abs().to_i32().ok_or_else(|| Error::Contract("exponent too large".into()))?;
                (0..g.n())
                    .map(|v| {
                        let p = num_traits::pow(rational(v)?, mag as usize);
                        Ok(if e.is_negative() { p.recip() } else { p })
                    })
                    .collect::<Result<_>>()
                    .map(PoweredWeights::Exact)
            }
            Exponent::Power(a) => {
                let a = ToPrimitive::to_f64(a).ok_or_else(|| Error::Contract("exponent not representable".into()))?;
                Ok(PoweredWeights::Approx((0..g.n()).map(|v| g.weight(v).as_f64().powf(a)).collect()))
            }
        }
    }

    /// Objective change `w^α(gained) − w^α(lost)`; approximate lanes are
    /// converted from their float value.
    pub(crate) fn delta(&self, gained: &[usize], lost: &[usize]) -> Rational {
        match self {
            PoweredWeights::Exact(p) => {
                let sum = |s: &[usize]| s.iter().fold(Rational::zero(), |acc, &v| acc + &p[v]);
                sum(gained) - sum(lost)
            }
            PoweredWeights::Approx(p) => {
                let gain: f64 = gained.iter().map(|&v| p[v]).sum();
                let loss: f64 = lost.iter().map(|&v| p[v]).sum();
                Rational::from_float(gain - loss).unwrap_or_default()
            }
        }
    }

    /// Strictly improving under the exact order or the relative tolerance.
    pub(crate) fn improves(&self, gained: &[usize], lost: &[usize]) -> bool {
        match self {
            PoweredWeights::Exact(p) => {
                let sum = |s: &[usize]| s.iter().fold(Rational::zero(), |acc, &v| acc + &p[v]);
                sum(gained) > sum(lost)
            }
            PoweredWeights::Approx(p) => {
                let gain: f64 = gained.iter().map(|&v| p[v]).sum();
                let loss: f64 = lost.iter().map(|&v| p[v]).sum();
                gain > loss * (1.0 + POWER_TOLERANCE)
            }
        }
    }
}

struct Enumerator<'a, W> {
    g: &'a ConflictGraph<W>,
    a: &'a Solution<W>,
    powered: PoweredWeights,
    cap: usize,
    outside: Vec<usize>,
    blocked: Vec<u32>,
    covered: Vec<u32>,
    lost: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl<W: Scalar> Enumerator<'_, W> {
    fn cover(&mut self, x: usize, delta: i32) {
        for v in std::iter::once(x).chain(self.g.neighbors(x).iter().copied()) {
            self.blocked[v] = (self.blocked[v] as i32 + delta) as u32;
            if self.a.contains(v) {
                let c = &mut self.covered[v];
                if *c == 0 && delta > 0 {
                    self.lost.push(v);
                }
                *c = (*c as i32 + delta) as u32;
                if *c == 0 {
                    let pos = self.lost.iter().rposition(|&u| u == v).expect("tracked");
                    self.lost.remove(pos);
                }
            }
        }
    }

    fn dfs(&mut self, from: usize, x: &mut Vec<usize>) -> Result<Option<Vec<usize>>> {
        for i in from..self.outside.len() {
            let v = self.outside[i];
            if self.blocked[v] > 0 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::budget("improvement enumeration nodes", self.budget));
            }
            x.push(v);
            self.cover(v, 1);
            if self.powered.improves(x, &self.lost) {
                return Ok(Some(x.clone()));
            }
            if x.len() < self.cap {
                if let Some(found) = self.dfs(i + 1, x)? {
                    return Ok(Some(found));
                }
            }
            self.cover(v, -1);
            x.pop();
        }
        Ok(None)
    }
}

/// Complete search for an independent `X ⊆ V \ A` with `|X| ≤ cap` and
/// `w^α(X) > w^α(N(X, A))`. The first hit in lexicographic DFS order wins.
pub fn exhaustive_improvement_search<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    exponent: &Exponent,
    cap: usize,
    budget: u64,
) -> Result<Option<Improvement>> {
    let powered = PoweredWeights::new(g, exponent)?;
    let outside = (0..g.n()).filter(|&v| !a.contains(v)).collect();
    let mut e = Enumerator {
        g,
        a,
        powered,
        cap,
        outside,
        blocked: vec![0; g.n()],
        covered: vec![0; g.n()],
        lost: Vec::new(),
        nodes: 0,
        budget,
    };
    if cap == 0 {
        return Ok(None);
    }
    Ok(e.dfs(0, &mut Vec::new())?.map(|x| Improvement::new(g, a, x, ImprovementKind::Generic)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn small_optima() {
        let single = ConflictGraph::new(vec![7i64], &[]).unwrap();
        assert_eq!(exact_mwis(&single, OracleOptions::default()).unwrap().optimum_w, 7);
        let edge = ConflictGraph::new(vec![3i64, 5], &[(0, 1)]).unwrap();
        let r = exact_mwis(&edge, OracleOptions::default()).unwrap();
        assert_eq!((r.optimum_w, r.best.members()), (5, vec![1]));
        let empty = ConflictGraph::<i64>::new(vec![], &[]).unwrap();
        assert_eq!(exact_mwis(&empty, OracleOptions::default()).unwrap().optimum_w, 0);
    }

    #[test]
    fn budget_carries_best_so_far() {
        let g = ConflictGraph::new(vec![1i64; 6], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let err = exact_mwis(&g, OracleOptions { max_n: 40, node_budget: 3 }).unwrap_err();
        assert!(matches!(err, Error::Budget { limit: 3, .. }));
    }

    #[test]
    fn optimum_admits_no_linear_improvement() {
        let g = ConflictGraph::new(vec![2i64, 3, 2, 4, 1], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let opt = exact_mwis(&g, OracleOptions::default()).unwrap();
        let found = exhaustive_improvement_search(&g, &opt.best, &Exponent::power(q(1, 1)).unwrap(), 5, 1 << 20);
        assert_eq!(found.unwrap(), None);
    }

    #[test]
    fn zero_exponent_is_rejected() {
        assert!(Exponent::power(q(0, 1)).is_err());
    }

    #[test]
    fn fractional_exponent_ties_do_not_improve() {
        // Two weight-4 talons against one weight-8 center under α = 1/2:
        // 2·2 vs √8 ≈ 2.83 improves; one talon (2 vs 2.83) does not.
        let g = ConflictGraph::new(vec![8i64, 4, 4], &[(0, 1), (0, 2)]).unwrap();
        let a = Solution::from_members(&g, &[0]).unwrap();
        let half = Exponent::power(q(1, 2)).unwrap();
        assert_eq!(exhaustive_improvement_search(&g, &a, &half, 1, 1000).unwrap(), None);
        let imp = exhaustive_improvement_search(&g, &a, &half, 2, 1000).unwrap().unwrap();
        assert_eq!(imp.added, vec![1, 2]);
        // Exact tie at α = 1 for weights 4+4 vs 8.
        assert_eq!(exhaustive_improvement_search(&g, &a, &Exponent::power(q(1, 1)).unwrap(), 2, 1000).unwrap(), None);
    }
}
