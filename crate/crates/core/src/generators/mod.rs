//! Instance families: the tight example for claw-only local search, the
//! lower-bound constructions for local search on `w^α`, and seeded random
//! packings.

pub mod regular;

pub use regular::{gen_high_girth_regular, girth};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::instance::{build_conflict_graph, Instance, MwisInstance, PackingInstance};
use crate::scalar::{rational_serde, Rational, Scalar};
use crate::solution::Solution;

/// A generated instance with a designated solution and a heavier
/// comparison set.
#[derive(Clone, Debug)]
pub struct Family {
    pub instance: Instance,
    pub graph: ConflictGraph<Rational>,
    pub solution: Solution<Rational>,
    pub optimum: Solution<Rational>,
}

impl Family {
    /// `w(optimum) / w(solution)`.
    pub fn ratio(&self) -> Rational {
        self.optimum.total_w() / self.solution.total_w()
    }
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The tight instance for claw-only local search. `A = {1, …, d−1}` and `B`
/// holds every 1- and 2-element subset of `A`; `a ∈ A` conflicts with
/// `b ∈ B` iff `a ∈ b`. All weights are 1.
///
/// Vertex ids: `A` first, then the singletons, then the pairs in
/// lexicographic order. The packing uses one element per conflict edge, so
/// every set has at most `d − 1` elements.
pub fn gen_berman_tight(d: usize) -> Result<Family> {
    if d < 3 {
        return Err(Error::InvalidInstance("the tight family needs d ≥ 3".into()));
    }
    let m = d - 1;
    let mut members: Vec<Vec<usize>> = (0..m).map(|a| vec![a]).collect();
    for a in 0..m {
        for b in a + 1..m {
            members.push(vec![a, b]);
        }
    }
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); m + members.len()];
    let mut element = 0;
    for (j, b) in members.iter().enumerate() {
        for &a in b {
            sets[a].push(element);
            sets[m + j].push(element);
            element += 1;
        }
    }
    let weights = vec![Rational::one(); sets.len()];
    let inst = PackingInstance::new(element, m, sets, weights)?;
    let graph = build_conflict_graph(&inst)?;
    let solution = Solution::from_members(&graph, &(0..m).collect::<Vec<_>>())?;
    let optimum = Solution::from_members(&graph, &(m..graph.n()).collect::<Vec<_>>())?;
    Ok(Family { instance: Instance::Packing(inst), graph, solution, optimum })
}

fn mwis_family(
    weights: Vec<Rational>,
    edges: Vec<(usize, usize)>,
    d: usize,
    a: &[usize],
    b: &[usize],
) -> Result<Family> {
    let graph = ConflictGraph::new(weights.clone(), &edges)?.with_claw_bound(Some(d));
    let solution = Solution::from_members(&graph, a)?;
    let optimum = Solution::from_members(&graph, b)?;
    let instance = Instance::Mwis(MwisInstance { weights, edges, claw_bound: Some(d) });
    Ok(Family { instance, graph, solution, optimum })
}

/// A cycle on `2·n_pairs` vertices whose weights alternate between
/// `2/(d−1−ε)` (even ids, the solution) and `1` (odd ids, the optimum).
pub fn gen_alternating_cycle(n_pairs: usize, d: usize, eps: &Rational) -> Result<Family> {
    if n_pairs < 2 || d < 4 || !eps.is_positive() || eps >= &Rational::one() {
        return Err(Error::InvalidInstance("need n_pairs ≥ 2, d ≥ 4 and 0 < eps < 1".into()));
    }
    let n = 2 * n_pairs;
    let light = int(2) / (int(d - 1) - eps);
    let weights = (0..n).map(|v| if v % 2 == 0 { light.clone() } else { Rational::one() }).collect();
    let edges = (0..n).map(|v| (v.min((v + 1) % n), v.max((v + 1) % n))).collect();
    let evens: Vec<usize> = (0..n).step_by(2).collect();
    let odds: Vec<usize> = (1..n).step_by(2).collect();
    mwis_family(weights, edges, d, &evens, &odds)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundParams {
    pub d: usize,
    #[serde(with = "rational_serde")]
    pub alpha: Rational,
    #[serde(with = "rational_serde")]
    pub eps: Rational,
    pub target_girth: usize,
    /// `1/⌈1/ε′_d⌉` with `ε′_d = 1 − (1 − ε/(d−1))^α`.
    #[serde(with = "rational_serde")]
    pub eps_d: Rational,
}

/// `a^p ≤ b^q`.
fn pow_le(a: &Rational, p: u32, b: &Rational, q: u32) -> bool {
    num_traits::pow(a.clone(), p as usize) <= num_traits::pow(b.clone(), q as usize)
}

impl LowerBoundParams {
    /// Chooses the largest `ε_d ≤ ε′_d` whose reciprocal is an integer.
    /// Exact for every rational `α > 0`.
    pub fn new(d: usize, alpha: Rational, eps: Rational, target_girth: usize) -> Result<Self> {
        if d < 4 || !alpha.is_positive() || !eps.is_positive() || eps >= Rational::one() {
            return Err(Error::InvalidInstance("need d ≥ 4, alpha > 0 and 0 < eps < 1".into()));
        }
        let exponent = |r: &BigInt| r.to_u32().ok_or_else(|| Error::InvalidInstance("alpha too complex".into()));
        let (p, q) = (exponent(alpha.numer())?, exponent(alpha.denom())?);
        let base = Rational::one() - &eps / int(d - 1);
        // ε_d = 1/m ≤ 1 − base^α  ⇔  base^p ≤ (1 − 1/m)^q.
        let fits = |m: &BigInt| pow_le(&base, p, &(Rational::one() - Rational::new(BigInt::one(), m.clone())), q);
        let estimate = 1.0 / (1.0 - base.as_f64().powf(alpha.as_f64()));
        let mut m = BigInt::from(estimate.ceil().max(2.0) as u64);
        while m > BigInt::from(2) && fits(&(&m - 1)) {
            m -= 1;
        }
        while !fits(&m) {
            m += 1;
        }
        Ok(LowerBoundParams { d, alpha, eps, target_girth, eps_d: Rational::new(BigInt::one(), m) })
    }

    /// `ε′_d` when `α` is an integer.
    pub fn eps_prime_d(&self) -> Option<Rational> {
        let p = self.alpha.is_integer().then(|| self.alpha.to_integer().to_usize())??;
        let base = Rational::one() - &self.eps / int(self.d - 1);
        Some(Rational::one() - num_traits::pow(base, p))
    }

    /// Edge-side weight `(1 − ε_d)^(1/α)`; exact when `1/α` is an integer,
    /// otherwise the nearest `f64` and `false`.
    pub fn edge_weight(&self) -> (Rational, bool) {
        let base = Rational::one() - &self.eps_d;
        let inv = self.alpha.recip();
        if let Some(e) = inv.is_integer().then(|| inv.to_integer().to_usize()).flatten() {
            return (num_traits::pow(base, e), true);
        }
        let approx = base.as_f64().powf(inv.as_f64());
        (Rational::from_float(approx).expect("finite weight"), false)
    }
}

/// The incidence graph of `H` as a conflict graph: vertices of `H` (weight
/// 1, the solution) followed by edges of `H` (weight `(1−ε_d)^(1/α)`, the
/// optimum), with `v` and `e` adjacent iff `v ∈ e`.
pub fn gen_incidence_lowerbound<W: Scalar>(params: &LowerBoundParams, h: &ConflictGraph<W>) -> Result<Family> {
    let k = params.d - 1;
    if let Some(v) = (0..h.n()).find(|&v| h.degree(v) != k) {
        return Err(Error::InvalidInstance(format!("host vertex {v} has degree {} instead of {k}", h.degree(v))));
    }
    if girth(h).is_some_and(|g| g < params.target_girth) {
        return Err(Error::InvalidInstance(format!("host girth is below {}", params.target_girth)));
    }
    let n = h.n();
    let host_edges: Vec<(usize, usize)> = h.edges().collect();
    let (w_edge, _) = params.edge_weight();
    let mut weights = vec![Rational::one(); n];
    weights.extend(std::iter::repeat_n(w_edge, host_edges.len()));
    let mut edges = Vec::with_capacity(2 * host_edges.len());
    for (i, &(u, v)) in host_edges.iter().enumerate() {
        edges.push((u, n + i));
        edges.push((v, n + i));
    }
    edges.sort_unstable();
    let a: Vec<usize> = (0..n).collect();
    let b: Vec<usize> = (n..n + host_edges.len()).collect();
    mwis_family(weights, edges, params.d, &a, &b)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightDist {
    /// Integers drawn uniformly from `1..=max`.
    UniformInt { max: u64 },
    /// `1 + η·(2j/1000 − 1)` for `j` uniform in `0..=1000`.
    NearUnit {
        #[serde(with = "rational_serde")]
        eta: Rational,
    },
}

/// Seeded random packing. Set sizes are uniform in `1..=min(k, universe)`
/// and elements are drawn without repetition.
pub fn gen_random_packing(
    n_sets: usize,
    k: usize,
    universe: usize,
    dist: &WeightDist,
    seed: u64,
) -> Result<PackingInstance> {
    if k == 0 || universe == 0 {
        return Err(Error::InvalidInstance("k and the universe must be positive".into()));
    }
    match dist {
        WeightDist::UniformInt { max: 0 } => return Err(Error::InvalidInstance("max weight must be positive".into())),
        WeightDist::NearUnit { eta } if eta.is_negative() || eta >= &Rational::one() => {
            return Err(Error::InvalidInstance("eta must lie in [0, 1)".into()))
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::with_capacity(n_sets);
    let mut weights = Vec::with_capacity(n_sets);
    for _ in 0..n_sets {
        let size = rng.gen_range(1..=k.min(universe));
        let mut set = sample(&mut rng, universe, size).into_vec();
        set.sort_unstable();
        sets.push(set);
        weights.push(match dist {
            WeightDist::UniformInt { max } => Rational::from_integer(rng.gen_range(1..=*max).into()),
            WeightDist::NearUnit { eta } => {
                let j: i64 = rng.gen_range(0..=1000);
                Rational::one() + eta * (Rational::new(BigInt::from(2 * j), BigInt::from(1000)) - Rational::one())
            }
        });
    }
    PackingInstance::new(universe, k, sets, weights)
}

impl WeightDist {
    pub fn near_unit(eta: Rational) -> Self {
        WeightDist::NearUnit { eta }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::find_claw_improvement;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn berman_counts() {
        for (d, b) in [(4, 6), (5, 10), (6, 15)] {
            let f = gen_berman_tight(d).unwrap();
            assert_eq!(f.solution.len(), d - 1);
            assert_eq!(f.optimum.len(), b);
            assert_eq!(f.ratio(), q(d as i64, 2));
            assert!((0..d - 1).all(|a| f.graph.degree(a) == d - 1));
            assert_eq!(f.graph.claw_bound(), Some(d));
            assert!(find_claw_improvement(&f.graph, &f.solution, 1_000_000).unwrap().is_none());
        }
    }

    #[test]
    fn berman_edges_are_memberships() {
        let f = gen_berman_tight(4).unwrap();
        // Singletons are 3..6, then pairs {0,1}, {0,2}, {1,2}.
        let mut nb = f.graph.neighbors(7).to_vec();
        nb.sort();
        assert_eq!(nb, vec![0, 2]);
        assert_eq!(f.graph.num_edges(), 3 + 2 * 3);
    }

    #[test]
    fn alternating_cycle_ratio() {
        let f = gen_alternating_cycle(4, 5, &q(1, 2)).unwrap();
        assert_eq!(f.ratio(), q(7, 4));
        assert!((0..8).all(|v| f.graph.degree(v) == 2));
        assert_eq!(f.graph.weight(0), &q(4, 7));
    }

    #[test]
    fn eps_d_is_largest_reciprocal() {
        let p = LowerBoundParams::new(4, q(1, 1), q(1, 2), 5).unwrap();
        assert_eq!(p.eps_prime_d(), Some(q(1, 6)));
        assert_eq!(p.eps_d, q(1, 6));
        // α = 2: ε′ = 1 − (5/6)² = 11/36, so m = ⌈36/11⌉ = 4.
        let p = LowerBoundParams::new(4, q(2, 1), q(1, 2), 5).unwrap();
        assert_eq!(p.eps_d, q(1, 4));
        // α = 1/2: ε′ = 1 − √(5/6) ≈ 0.0871, so m = 12.
        let p = LowerBoundParams::new(4, q(1, 2), q(1, 2), 5).unwrap();
        assert_eq!(p.eps_d, q(1, 12));
        assert_eq!(p.edge_weight(), (q(121, 144), true));
    }

    #[test]
    fn petersen_incidence() {
        let h = gen_high_girth_regular(3, 5, 0, 1).unwrap();
        let p = LowerBoundParams::new(4, q(1, 1), q(1, 2), 5).unwrap();
        let f = gen_incidence_lowerbound(&p, &h).unwrap();
        assert_eq!(f.graph.n(), 25);
        assert_eq!(f.solution.total_w(), &q(10, 1));
        assert_eq!(f.ratio(), q(5, 4));
        assert!((0..25).all(|v| (2..=3).contains(&f.graph.degree(v))));
    }

    #[test]
    fn random_packing_is_seeded() {
        let dist = WeightDist::UniformInt { max: 9 };
        let a = gen_random_packing(12, 3, 9, &dist, 5).unwrap();
        let b = gen_random_packing(12, 3, 9, &dist, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.sets.iter().all(|s| (1..=3).contains(&s.len())));
        let near = gen_random_packing(12, 3, 9, &WeightDist::near_unit(q(1, 10)), 5).unwrap();
        assert!(near.weights.iter().all(|w| w >= &q(9, 10) && w <= &q(11, 10)));
    }
}
