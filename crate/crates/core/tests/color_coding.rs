//! The colorful path program against direct enumeration of colorful
//! paths and cycles.

use std::collections::BTreeSet;

use clawpack::bitset::BitSet;
use clawpack::circular::{colorful_cycle_dp, colorful_path_table, per_trial_success, ColoredMultigraph, PathKey};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

const WIDTH: usize = 14;

fn colored_strategy() -> impl Strategy<Value = ColoredMultigraph> {
    (3usize..8).prop_flat_map(|n| {
        let vertex = prop::collection::btree_set(0..WIDTH, 1..3);
        let edge = (0..n, 0..n, prop::collection::btree_set(0..WIDTH, 0..3));
        (prop::collection::vec(vertex, n), prop::collection::vec(edge, 0..14)).prop_map(move |(vc, es)| {
            let mut h = ColoredMultigraph::new(WIDTH, n);
            for (p, c) in vc.into_iter().enumerate() {
                h.vertex_colors[p] = BitSet::from_iter(WIDTH, c);
            }
            for (a, b, c) in es {
                if a != b {
                    h.add_edge(a, b, c);
                }
            }
            h
        })
    })
}

/// Extends colorful paths edge by edge, calling `visit` on each.
/// Called with the vertices, edges and color union of each path prefix.
type Visit<'a> = dyn FnMut(&[usize], &[usize], &BitSet) + 'a;

fn walk(
    h: &ColoredMultigraph,
    path: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    colors: &BitSet,
    max_edges: usize,
    visit: &mut Visit,
) {
    visit(path, edges, colors);
    if edges.len() == max_edges {
        return;
    }
    let last = *path.last().unwrap();
    for (e, edge) in h.edges.iter().enumerate() {
        let next = match edge.ends {
            [a, b] if a == last => b,
            [a, b] if b == last => a,
            _ => continue,
        };
        let (ec, vc) = (&edge.colors, &h.vertex_colors[next]);
        if path.contains(&next) || ec.intersects(colors) || vc.intersects(colors) || ec.intersects(vc) {
            continue;
        }
        path.push(next);
        edges.push(e);
        walk(h, path, edges, &colors.union(ec).union(vc), max_edges, visit);
        path.pop();
        edges.pop();
    }
}

fn brute_paths(h: &ColoredMultigraph, max_edges: usize) -> BTreeSet<PathKey> {
    let mut out = BTreeSet::new();
    for s in 0..h.vertex_colors.len() {
        let mut visit = |p: &[usize], _: &[usize], c: &BitSet| {
            out.insert(PathKey { start: p[0], end: *p.last().unwrap(), colors: c.clone(), len: p.len() - 1 });
        };
        walk(h, &mut vec![s], &mut Vec::new(), &h.vertex_colors[s].clone(), max_edges, &mut visit);
    }
    out
}

fn brute_has_cycle(h: &ColoredMultigraph, max_len: usize) -> bool {
    let mut found = false;
    for s in 0..h.vertex_colors.len() {
        let mut visit = |p: &[usize], _: &[usize], c: &BitSet| {
            if p.len() < 3 || p.len() > max_len {
                return;
            }
            let last = *p.last().unwrap();
            found |= h.edges.iter().any(|e| (e.ends == [last, s] || e.ends == [s, last]) && !e.colors.intersects(c));
        };
        walk(h, &mut vec![s], &mut Vec::new(), &h.vertex_colors[s].clone(), max_len - 1, &mut visit);
    }
    found
}

fn assert_colorful_cycle(h: &ColoredMultigraph, vertices: &[usize], edges: &[usize], max_len: usize) {
    let len = vertices.len();
    assert!((3..=max_len).contains(&len) && edges.len() == len);
    assert_eq!(vertices.iter().collect::<BTreeSet<_>>().len(), len);
    let mut seen = BitSet::new(h.width);
    for i in 0..len {
        let [a, b] = h.edges[edges[i]].ends;
        let (p, q) = (vertices[i], vertices[(i + 1) % len]);
        assert!((a, b) == (p, q) || (a, b) == (q, p));
        for c in [&h.vertex_colors[p], &h.edges[edges[i]].colors] {
            assert!(!c.intersects(&seen));
            seen.union_with(c);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn path_table_matches_enumeration(h in colored_strategy(), max_edges in 0usize..5) {
        prop_assert_eq!(colorful_path_table(&h, max_edges, 1 << 20).unwrap(), brute_paths(&h, max_edges));
    }

    #[test]
    fn cycle_program_matches_enumeration(h in colored_strategy(), max_len in 3usize..7) {
        let found = colorful_cycle_dp(&h, max_len, 1 << 20).unwrap();
        prop_assert_eq!(found.is_some(), brute_has_cycle(&h, max_len));
        if let Some(c) = found {
            assert_colorful_cycle(&h, &c.vertices, &c.edges, max_len);
        }
    }
}

#[test]
fn uncolored_vertices_are_rejected() {
    let h = ColoredMultigraph::new(4, 3);
    assert!(colorful_cycle_dp(&h, 3, 100).is_err());
}

#[test]
fn per_trial_success_is_the_falling_factorial_ratio() {
    for (t, m) in [(8, 8), (12, 5), (20, 8), (3, 4), (50, 1)] {
        let falling: BigUint = (t - m.min(t) + 1..=t).map(BigUint::from).product();
        let expected = if m > t {
            0.0
        } else {
            BigRational::new(falling.into(), BigUint::from(t).pow(m as u32).into()).to_f64().unwrap()
        };
        let got = per_trial_success(t, m);
        assert!((got - expected).abs() < 1e-12, "t={t} m={m}: {got} vs {expected}");
    }
    assert!(per_trial_success(5, 0) == BigRational::one().to_f64().unwrap());
}

/// The `d = 4` tight instance padded with isolated solution sets so that
/// the universe exceeds `t` and colorings are random. Its circular
/// improvement covers at most eight elements, so a single coloring with
/// `t` colors finds one with probability at least `per_trial_success(t, 8)`.
#[test]
fn randomized_colorings_meet_the_per_trial_bound() {
    use clawpack::circular::{build_anchor_maps, find_circular_improvement, CircularOutcome, ColorCodingParams};
    use clawpack::generators::gen_berman_tight;
    use clawpack::{build_conflict_graph, Instance, Rational, Solution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    let f = gen_berman_tight(4).unwrap();
    let Instance::Packing(mut p) = f.instance else { panic!("tight instances are packings") };
    let base = p.sets.len();
    for i in 0..3 {
        let first = p.universe_size + 3 * i;
        p.sets.push(vec![first, first + 1, first + 2]);
        p.weights.push(Rational::from_integer(1.into()));
    }
    p.universe_size += 9;
    let g = build_conflict_graph(&p).unwrap();
    let members: Vec<usize> = f.solution.members().into_iter().chain(base..base + 3).collect();
    let a = Solution::from_members(&g, &members).unwrap();
    let maps = build_anchor_maps(&g, &a).unwrap();

    let runs = |repetitions: Option<usize>, trials: u64| {
        let params = ColorCodingParams { t: Some(12), repetitions, ..ColorCodingParams::default() };
        (0..trials)
            .filter(|&seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let out = find_circular_improvement(&g, &a, &maps, &params, &mut rng).unwrap();
                matches!(out, CircularOutcome::Found(_))
            })
            .count() as f64
            / trials as f64
    };
    let p = per_trial_success(12, 8);
    let single = runs(Some(1), 2000);
    let sigma = (p * (1.0 - p) / 2000.0).sqrt();
    assert!(single >= p - 3.0 * sigma, "single coloring hit rate {single} below {p}");
    assert!(single < 1.0, "colorings were not random");
    assert!(runs(None, 200) >= 0.99);
}
