use ect_core::format::{parse_instance, parse_report, write_instance, write_report};
use ect_core::generators::{grid_subgraph, mixed_corpus, CostProfile};
use ect_core::solver::run_primal_dual;
use ect_core::Rational;
use proptest::prelude::*;

#[test]
fn corpus_instances_round_trip() {
    for spec in mixed_corpus(200) {
        let inst = spec.build().unwrap();
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst, "{spec}");
        assert_eq!(write_instance(&back), text, "{spec}");
    }
}

#[test]
fn corpus_reports_round_trip() {
    for spec in mixed_corpus(60) {
        let rep = run_primal_dual(&spec.build().unwrap()).unwrap();
        let text = write_report(&rep, &[]);
        let (back, verdicts) = parse_report(&text).unwrap();
        assert_eq!(back, rep, "{spec}");
        assert!(verdicts.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rational_costs_and_rotations_round_trip(
        w in 1usize..=5,
        h in 1usize..=5,
        seed in any::<u64>(),
        nums in proptest::collection::vec((0i64..1000, 1i64..1000), 25),
        with_rotation in any::<bool>(),
    ) {
        let mut inst = grid_subgraph(w, h, 80, CostProfile::Unit, seed).unwrap();
        for v in inst.graph.nodes().collect::<Vec<_>>() {
            let (n, d) = nums[v % nums.len()];
            inst.graph.set_cost(v, Rational::new(n.into(), d.into()));
        }
        if with_rotation {
            let emb = inst.embedding().unwrap();
            inst.rotation = Some(inst.graph.nodes().map(|v| emb.rotation(v).iter().map(|d| d.edge).collect()).collect());
        }
        let back = parse_instance(&write_instance(&inst)).unwrap();
        prop_assert_eq!(back, inst);
    }
}
