use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::Scalar;
use crate::solution::{Improvement, ImprovementKind, Solution};

pub const DEFAULT_CLAW_BUDGET: u64 = 50_000_000;

struct TalonSearch<'a, W> {
    g: &'a ConflictGraph<W>,
    a: &'a Solution<W>,
    pool: Vec<usize>,
    max_talons: usize,
    covered: Vec<u32>,
    gained: W,
    lost: W,
    work: u64,
    budget: u64,
}

impl<W: Scalar> TalonSearch<'_, W> {
    fn toggle(&mut self, x: usize, add: bool) {
        let wx = self.g.weight(x).square();
        self.gained = if add { self.gained.clone() + wx } else { self.gained.clone() - wx };
        for &v in self.g.neighbors(x) {
            if !self.a.contains(v) {
                continue;
            }
            if add {
                self.covered[v] += 1;
                if self.covered[v] == 1 {
                    self.lost = self.lost.clone() + self.g.weight(v).square();
                }
            } else {
                self.covered[v] -= 1;
                if self.covered[v] == 0 {
                    self.lost = self.lost.clone() - self.g.weight(v).square();
                }
            }
        }
    }

    fn dfs(&mut self, from: usize, talons: &mut Vec<usize>) -> Result<bool> {
        for i in from..self.pool.len() {
            let x = self.pool[i];
            if talons.iter().any(|&t| self.g.adjacent(t, x)) {
                continue;
            }
            self.work += 1;
            if self.work > self.budget {
                return Err(Error::budget("claw improvement search", self.budget));
            }
            talons.push(x);
            self.toggle(x, true);
            if self.gained > self.lost {
                return Ok(true);
            }
            if talons.len() < self.max_talons && self.dfs(i + 1, talons)? {
                return Ok(true);
            }
            self.toggle(x, false);
            talons.pop();
        }
        Ok(false)
    }
}

/// First claw-shaped improvement of `w²(A)` in deterministic order: the
/// lowest-id free vertex, else centers `c ∈ A` ascending with talon sets
/// `T ⊆ N(c) \ A` in lexicographic order, `|T| ≤ d − 1` when `d` is known.
pub fn find_claw_improvement<W: Scalar>(
    g: &ConflictGraph<W>,
    a: &Solution<W>,
    budget: u64,
) -> Result<Option<Improvement>> {
    if let Some(&v) = a.free_vertices(g).first() {
        return Ok(Some(Improvement::new(g, a, vec![v], ImprovementKind::ClawShaped { center: None })));
    }
    let max_talons = g.claw_bound().map_or(usize::MAX, |d| d.saturating_sub(1));
    let mut search = TalonSearch {
        g,
        a,
        pool: Vec::new(),
        max_talons,
        covered: vec![0; g.n()],
        gained: W::zero(),
        lost: W::zero(),
        work: 0,
        budget,
    };
    for c in a.members() {
        search.pool = g.neighbors(c).iter().copied().filter(|&x| !a.contains(x)).collect();
        let mut talons = Vec::new();
        if max_talons > 0 && search.dfs(0, &mut talons)? {
            return Ok(Some(Improvement::new(g, a, talons, ImprovementKind::ClawShaped { center: Some(c) })));
        }
    }
    Ok(None)
}
