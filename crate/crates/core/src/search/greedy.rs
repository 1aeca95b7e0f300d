use std::cmp::Ordering;

use crate::graph::ConflictGraph;
use crate::scalar::Scalar;
use crate::solution::Solution;

/// Vertices in the order greedy selects them: repeatedly the heaviest
/// remaining vertex (lowest id on ties), deleting its closed neighborhood.
pub fn greedy_order<W: Scalar>(g: &ConflictGraph<W>) -> Vec<usize> {
    let mut by_weight: Vec<usize> = (0..g.n()).collect();
    by_weight.sort_by(|&a, &b| g.weight(b).partial_cmp(g.weight(a)).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    let mut blocked = vec![false; g.n()];
    let mut order = Vec::new();
    for v in by_weight {
        if blocked[v] {
            continue;
        }
        order.push(v);
        blocked[v] = true;
        for &u in g.neighbors(v) {
            blocked[u] = true;
        }
    }
    order
}

pub fn greedy<W: Scalar>(g: &ConflictGraph<W>) -> Solution<W> {
    Solution::from_members(g, &greedy_order(g)).expect("ids in range")
}
