use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::Scalar;

/// Independent vertex set with cached `w` and `w²` totals.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<W> {
    mask: Vec<bool>,
    len: usize,
    total_w: W,
    total_w2: W,
}

impl<W: Scalar> Solution<W> {
    pub fn empty(n: usize) -> Self {
        Solution { mask: vec![false; n], len: 0, total_w: W::zero(), total_w2: W::zero() }
    }

    /// Builds a solution with coherent caches. Independence is not
    /// checked here; see [`verify_solution`].
    pub fn from_members(g: &ConflictGraph<W>, members: &[usize]) -> Result<Self> {
        let mut s = Self::empty(g.n());
        for &v in members {
            g.check_vertex(v)?;
            if !s.mask[v] {
                s.insert(g, v);
            }
        }
        Ok(s)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.mask[v]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&v| self.mask[v]).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn total_w(&self) -> &W {
        &self.total_w
    }

    pub fn total_w2(&self) -> &W {
        &self.total_w2
    }

    fn insert(&mut self, g: &ConflictGraph<W>, v: usize) {
        self.mask[v] = true;
        self.len += 1;
        self.total_w = self.total_w.clone() + g.weight(v).clone();
        self.total_w2 = self.total_w2.clone() + g.weight(v).square();
    }

    fn remove(&mut self, g: &ConflictGraph<W>, v: usize) {
        self.mask[v] = false;
        self.len -= 1;
        self.total_w = self.total_w.clone() - g.weight(v).clone();
        self.total_w2 = self.total_w2.clone() - g.weight(v).square();
    }

    /// `N(X, A)` for this solution `A`.
    pub fn neighborhood_of(&self, g: &ConflictGraph<W>, x: &[usize]) -> Vec<usize> {
        g.neighborhood_in(x, |v| self.mask[v]).into_iter().collect()
    }

    /// Vertices outside the solution with no neighbor in it.
    pub fn free_vertices(&self, g: &ConflictGraph<W>) -> Vec<usize> {
        (0..g.n()).filter(|&v| !self.mask[v] && g.neighbors(v).iter().all(|&u| !self.mask[u])).collect()
    }

    pub fn is_maximal(&self, g: &ConflictGraph<W>) -> bool {
        self.free_vertices(g).is_empty()
    }

    /// Swaps `X` in and `N(X, A)` out. Returns the change in `w²`.
    pub fn apply(&mut self, g: &ConflictGraph<W>, imp: &Improvement) -> W {
        let before = self.total_w2.clone();
        for &v in &imp.removed {
            if self.mask[v] {
                self.remove(g, v);
            }
        }
        for &v in &imp.added {
            if !self.mask[v] {
                self.insert(g, v);
            }
        }
        self.total_w2.clone() - before
    }

    /// Re-expresses the solution in another scalar lane over the same
    /// vertex set.
    pub fn rebase<V: Scalar>(&self, g: &ConflictGraph<V>) -> Solution<V> {
        Solution::from_members(g, &self.members()).expect("same vertex set")
    }
}

/// Members pairwise non-adjacent and caches coherent.
pub fn verify_solution<W: Scalar>(g: &ConflictGraph<W>, s: &Solution<W>) -> bool {
    if s.mask.len() != g.n() {
        return false;
    }
    let members = s.members();
    members.len() == s.len
        && g.is_independent(&members)
        && g.total_weight(&members) == s.total_w
        && g.total_square(&members) == s.total_w2
}

/// Evidence attached to a circular improvement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularEvidence {
    /// Edge-inducing vertices, in cycle order.
    pub u: Vec<usize>,
    /// Anchor vertices of the cycle; `cycle[i]` and `cycle[i+1]` are the
    /// endpoints of the edge induced by `u[i]`.
    pub cycle: Vec<usize>,
    /// The `Y` set hung on every cycle anchor.
    pub y: BTreeMap<usize, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ImprovementKind {
    ClawShaped { center: Option<usize> },
    Circular(CircularEvidence),
    Generic,
}

/// Local improvement: independent `X` outside `A` with
/// `w²(X) > w²(N(X, A))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Improvement {
    pub added: Vec<usize>,
    pub removed: Vec<usize>,
    pub kind: ImprovementKind,
}

impl Improvement {
    /// Computes `removed = N(X, A)`; `added` is sorted.
    pub fn new<W: Scalar>(g: &ConflictGraph<W>, a: &Solution<W>, mut added: Vec<usize>, kind: ImprovementKind) -> Self {
        added.sort_unstable();
        added.dedup();
        let removed = a.neighborhood_of(g, &added);
        Improvement { added, removed, kind }
    }

    pub fn size(&self) -> usize {
        self.added.len()
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ImprovementKind::ClawShaped { .. } => "claw",
            ImprovementKind::Circular(_) => "circular",
            ImprovementKind::Generic => "generic",
        }
    }

    pub fn gain<W: Scalar>(&self, g: &ConflictGraph<W>) -> W {
        g.total_square(&self.added) - g.total_square(&self.removed)
    }

    /// Structural checks shared by every kind, plus the claw-shaped
    /// constraints. Circular evidence is checked by the circular module.
    pub fn validate<W: Scalar>(&self, g: &ConflictGraph<W>, a: &Solution<W>) -> Result<()> {
        let fail = |m: &str| Err(Error::Contract(format!("invalid improvement: {m}")));
        for &v in self.added.iter().chain(&self.removed) {
            g.check_vertex(v)?;
        }
        if self.added.is_empty() {
            return fail("empty X");
        }
        if !g.is_independent(&self.added) {
            return fail("X not independent");
        }
        if self.added.iter().any(|&x| a.contains(x)) {
            return fail("X intersects A");
        }
        if self.removed != a.neighborhood_of(g, &self.added) {
            return fail("removed differs from N(X, A)");
        }
        if !self.gain(g).positive() {
            return fail("w² does not increase");
        }
        if let ImprovementKind::ClawShaped { center } = self.kind {
            match center {
                None => {
                    if self.added.len() != 1 || !self.removed.is_empty() {
                        return fail("centerless claw must be a single free vertex");
                    }
                }
                Some(c) => {
                    g.check_vertex(c)?;
                    if !a.contains(c) || self.added.iter().any(|&x| !g.adjacent(x, c)) {
                        return fail("talons not attached to a center in A");
                    }
                    if let Some(d) = g.claw_bound() {
                        if self.added.len() + 1 > d {
                            return fail("more than d-1 talons");
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caches_follow_swaps() {
        let g = ConflictGraph::new(vec![2i64, 3, 3], &[(0, 1), (0, 2)]).unwrap();
        let mut a = Solution::from_members(&g, &[0]).unwrap();
        assert!(verify_solution(&g, &a));
        let imp = Improvement::new(&g, &a, vec![2, 1], ImprovementKind::ClawShaped { center: Some(0) });
        assert_eq!(imp.removed, vec![0]);
        imp.validate(&g, &a).unwrap();
        assert_eq!(a.apply(&g, &imp), 14);
        assert_eq!(a.members(), vec![1, 2]);
        assert_eq!((*a.total_w(), *a.total_w2()), (6, 18));
        assert!(verify_solution(&g, &a));
    }

    #[test]
    fn adjacent_members_fail_verification() {
        let g = ConflictGraph::new(vec![1i64, 1], &[(0, 1)]).unwrap();
        assert!(verify_solution(&g, &Solution::empty(2)));
        assert!(!verify_solution(&g, &Solution::from_members(&g, &[0, 1]).unwrap()));
    }

    #[test]
    fn rejects_non_improving() {
        let g = ConflictGraph::new(vec![1i64, 2], &[(0, 1)]).unwrap();
        let a = Solution::from_members(&g, &[1]).unwrap();
        let imp = Improvement::new(&g, &a, vec![0], ImprovementKind::Generic);
        assert!(imp.validate(&g, &a).is_err());
    }
}
