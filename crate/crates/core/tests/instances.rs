use clawpack::generators::{gen_berman_tight, gen_random_packing, WeightDist};
use clawpack::instance::{from_json, parse_text, to_json, write_text};
use clawpack::{build_conflict_graph, Rational};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn text_and_json_preserve_random_packings(n in 1usize..20, k in 1usize..5, universe in 1usize..30, seed in any::<u64>()) {
        let dist = WeightDist::near_unit(Rational::new(1.into(), 3.into()));
        let inst = clawpack::Instance::Packing(gen_random_packing(n, k, universe, &dist, seed).unwrap());
        prop_assert_eq!(&parse_text(&write_text(&inst)).unwrap(), &inst);
        prop_assert_eq!(&from_json(&to_json(&inst)).unwrap(), &inst);
    }

    #[test]
    fn packing_conflict_graphs_are_claw_bounded(n in 1usize..16, k in 1usize..4, seed in any::<u64>()) {
        let p = gen_random_packing(n, k, 10, &WeightDist::UniformInt { max: 9 }, seed).unwrap();
        let g = build_conflict_graph(&p).unwrap();
        prop_assert!(clawpack::verify_claw_free(&g, k + 1, 1 << 22).unwrap().is_free());
        for (a, b) in g.edges() {
            prop_assert!(p.sets[a].iter().any(|e| p.sets[b].contains(e)));
        }
    }
}

#[test]
fn generated_instances_are_reproducible() {
    let dist = WeightDist::UniformInt { max: 50 };
    let a = gen_random_packing(14, 3, 12, &dist, 99).unwrap();
    assert_eq!(a, gen_random_packing(14, 3, 12, &dist, 99).unwrap());
    assert_ne!(a, gen_random_packing(14, 3, 12, &dist, 100).unwrap());
    let f = gen_berman_tight(5).unwrap();
    assert_eq!(to_json(&f.instance), to_json(&gen_berman_tight(5).unwrap().instance));
}
