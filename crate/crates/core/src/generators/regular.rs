//! Regular graphs of prescribed girth: a catalog of small cages plus a
//! seeded random construction.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::scalar::Scalar;

/// Length of a shortest cycle, `None` for forests.
pub fn girth<W: Scalar>(g: &ConflictGraph<W>) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; g.n()];
    let mut parent = vec![usize::MAX; g.n()];
    for root in 0..g.n() {
        dist.fill(usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[v] >= b) {
                break;
            }
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                } else if parent[v] != w {
                    let len = dist[v] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

fn lcf(n: usize, jumps: &[i64]) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for i in 0..n {
        let j = (i as i64 + jumps[i % jumps.len()]).rem_euclid(n as i64) as usize;
        if i < j {
            edges.push((i, j));
        }
    }
    edges
}

fn petersen() -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    edges
}

/// `(name, girth, order, edges)`.
type CatalogEntry = (&'static str, usize, usize, Vec<(usize, usize)>);

/// Catalog entries of degree `k`.
fn catalog(k: usize) -> Vec<CatalogEntry> {
    let complete: Vec<(usize, usize)> = (0..=k).flat_map(|a| (a + 1..=k).map(move |b| (a, b))).collect();
    let bipartite: Vec<(usize, usize)> = (0..k).flat_map(|a| (0..k).map(move |b| (a, k + b))).collect();
    let mut out = vec![("complete", 3, k + 1, complete), ("complete bipartite", 4, 2 * k, bipartite)];
    if k == 3 {
        out.push(("Petersen", 5, 10, petersen()));
        out.push(("Heawood", 6, 14, lcf(14, &[5, -5])));
        out.push(("McGee", 7, 24, lcf(24, &[12, 7, -7])));
        out.push(("Tutte-Coxeter", 8, 30, lcf(30, &[-13, -9, 7, -7, 9, 13])));
    }
    out
}

fn unit_graph(n: usize, edges: &[(usize, usize)]) -> Result<ConflictGraph<i64>> {
    ConflictGraph::new(vec![1; n], edges)
}

/// Smallest order of a `k`-regular graph with girth at least `l`.
fn moore_bound(k: usize, l: usize) -> usize {
    let geometric: usize = (0..l / 2).map(|i| (k - 1).pow(i as u32)).sum();
    if l % 2 == 1 {
        1 + k * geometric
    } else {
        2 * geometric
    }
}

/// One attempt at a `k`-regular graph on `n` vertices with girth at least
/// `l`: stubs are paired one edge at a time, and a pair is only allowed
/// when the endpoints are at distance at least `l − 1`.
fn grow(n: usize, k: usize, l: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(n * k / 2);
    let mut dist = vec![usize::MAX; n];
    loop {
        let open: Vec<usize> = (0..n).filter(|&v| adj[v].len() < k).collect();
        if open.is_empty() {
            return Some(edges);
        }
        let u = *open.choose(rng)?;
        dist.fill(usize::MAX);
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(v) = queue.pop_front() {
            if dist[v] + 1 >= l - 1 {
                continue;
            }
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let far: Vec<usize> = open.iter().copied().filter(|&v| v != u && dist[v] == usize::MAX).collect();
        let v = *far.choose(rng)?;
        adj[u].push(v);
        adj[v].push(u);
        edges.push((u.min(v), u.max(v)));
    }
}

/// A simple `k`-regular graph with girth at least `l`. Catalog graphs are
/// preferred; otherwise orders from the Moore bound upward are tried, a few
/// seeded attempts each, until `budget` attempts are spent.
pub fn gen_high_girth_regular(k: usize, l: usize, seed: u64, budget: u64) -> Result<ConflictGraph<i64>> {
    if k < 2 || l < 3 {
        return Err(Error::InvalidInstance("need degree at least 2 and girth at least 3".into()));
    }
    if let Some((_, _, n, edges)) = catalog(k).into_iter().filter(|c| c.1 >= l).min_by_key(|c| c.2) {
        return unit_graph(n, &edges);
    }
    const ATTEMPTS_PER_ORDER: u64 = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = moore_bound(k, l).max(k + 1);
    let mut spent = 0;
    while spent < budget {
        if n * k % 2 == 1 {
            n += 1;
            continue;
        }
        for _ in 0..ATTEMPTS_PER_ORDER.min(budget - spent) {
            spent += 1;
            if let Some(edges) = grow(n, k, l, &mut rng) {
                let g = unit_graph(n, &edges)?;
                debug_assert!(girth(&g).is_none_or(|x| x >= l));
                return Ok(g);
            }
        }
        n += 1 + rng.gen_range(0..2);
    }
    Err(Error::budget(format!("{k}-regular graph of girth {l}"), budget))
}
