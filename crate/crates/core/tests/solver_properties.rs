use ect_core::cycles::is_feasible_ect;
use ect_core::generators::{grid, grid_subgraph, handle_chain, mixed_corpus, pentagon_ring, tessellation, CostProfile, Role};
use ect_core::graph::NodeSet;
use ect_core::instance::Instance;
use ect_core::oracle::exact_ect_with_limit;
use ect_core::tiling::{quasi_perfect_tiling, two_thirds};
use ect_core::solver::{ratio_bound, reverse_delete, run_primal_dual, verify_certificate};
use ect_core::Rational;
use num_traits::Zero;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn euler_holds(inst: &Instance) -> bool {
    let g = &inst.graph;
    let faces = inst.faces().unwrap().len();
    let isolated = g.nodes().filter(|&v| g.degree(v) == 0).count();
    g.node_count() + faces + isolated == g.edge_count() + 2 * g.components().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn certificate_holds_on_small_instances(w in 2usize..=4, h in 2usize..=4, keep in 60u32..=100, seed in any::<u64>()) {
        let inst = grid_subgraph(w, h, keep, CostProfile::Uniform(1, 7), seed).unwrap();
        let rep = run_primal_dual(&inst).unwrap();
        prop_assert_eq!(verify_certificate(&inst, &rep, 16), Vec::<String>::new());
        prop_assert!(rep.piece_check.violations.is_empty());
        prop_assert_eq!(run_primal_dual(&inst).unwrap(), rep);
    }

    #[test]
    fn dual_values_stay_within_costs(w in 3usize..=6, h in 3usize..=6, seed in any::<u64>()) {
        let inst = grid(w, h, CostProfile::Uniform(0, 5), seed).unwrap();
        let rep = run_primal_dual(&inst).unwrap();
        let g = inst.effective_graph();
        for v in g.nodes() {
            let load: Rational = rep.inequalities.iter().filter_map(|i| i.coefficients.get(&v).map(|a| a * &i.y)).sum();
            prop_assert!(load <= *g.cost(v));
        }
        prop_assert!(rep.cost <= ratio_bound() * &rep.dual_objective);
        prop_assert!(is_feasible_ect(&g, &rep.solution.iter().copied().collect()));
    }

    #[test]
    fn generated_instances_satisfy_euler(w in 1usize..=6, h in 1usize..=6, keep in 0u32..=100, seed in any::<u64>()) {
        prop_assert!(euler_holds(&grid_subgraph(w, h, keep, CostProfile::Unit, seed).unwrap()));
    }
}

#[test]
fn structured_generators_satisfy_euler() {
    for k in [2, 4, 6] {
        assert!(euler_holds(&pentagon_ring(k, &r(1, 4)).unwrap().instance));
    }
    for k in [1, 3, 5] {
        assert!(euler_holds(&handle_chain(k).unwrap().instance));
    }
    for reps in 1..=5 {
        assert!(euler_holds(&tessellation(reps).unwrap()));
    }
}

#[test]
fn pentagon_rings_against_the_oracle() {
    for eps in [r(1, 10), r(1, 4), r(1, 2)] {
        for k in [2, 4, 6] {
            let gen = pentagon_ring(k, &eps).unwrap();
            let inst = &gen.instance;
            let rep = run_primal_dual(inst).unwrap();
            let (_, opt) = exact_ect_with_limit(&inst.effective_graph(), 30).unwrap();
            assert!(rep.dual_objective <= opt, "k={k} eps={eps}");
            assert!(rep.cost >= opt && rep.cost <= ratio_bound() * &opt, "k={k} eps={eps}");
            assert!(verify_certificate(inst, &rep, 30).is_empty(), "k={k} eps={eps}");
            assert!(!rep.infinite_in_solution);
            let black: NodeSet = gen.nodes_with(Role::Black).into_iter().collect();
            assert!(rep.solution.iter().all(|v| !black.contains(v)));
        }
    }
}

#[test]
fn handle_chain_pairs_beat_the_adversarial_cost() {
    for k in [1usize, 3, 5] {
        let gen = handle_chain(k).unwrap();
        let inst = &gen.instance;
        let rep = run_primal_dual(inst).unwrap();
        let adversarial = Rational::from_integer((2 + k as i64).into());
        assert!(rep.cost < adversarial, "k={k}: cost {}", rep.cost);
        assert!(verify_certificate(inst, &rep, 0).is_empty());
        let g = inst.effective_graph();
        let unpaired = reverse_delete(&g, &rep.order, &[]).unwrap();
        assert!(g.total_cost(&unpaired) >= rep.cost, "k={k}");
    }
}

/// Reverse delete first looks at the greens other than `v`, then the reds,
/// then one blue per handle, then the other blues. Without pairs this keeps
/// `v` and one blue per pentagon; the solver's own order reaches the optimum.
#[test]
fn handle_chain_adversarial_deletion_order() {
    for k in [1usize, 3, 5] {
        let gen = handle_chain(k).unwrap();
        let g = gen.instance.effective_graph();
        let v = gen.nodes_with(Role::GreenV);
        let greens = gen.nodes_with(Role::Green);
        let reds = gen.nodes_with(Role::Red);
        let blues = gen.nodes_with(Role::Blue);
        let (first_blues, second_blues): (Vec<_>, Vec<_>) = blues.chunks(2).map(|c| (c[0], c[1])).unzip();
        let consider: Vec<usize> = greens.iter().chain(&reds).chain(&first_blues).chain(&second_blues).chain(&v).copied().collect();
        let order: Vec<usize> = consider.into_iter().rev().collect();
        let unpaired = reverse_delete(&g, &order, &[]).unwrap();
        assert_eq!(g.total_cost(&unpaired), Rational::from_integer((2 + k as i64).into()), "k={k}");
        let rep = run_primal_dual(&gen.instance).unwrap();
        let paired = reverse_delete(&g, &order, &rep.pairs).unwrap();
        assert!(g.total_cost(&paired) <= g.total_cost(&unpaired), "k={k}");
        assert_eq!(rep.cost, Rational::from_integer(2.into()), "k={k}");
        let (_, opt) = exact_ect_with_limit(&g, 30).unwrap();
        assert_eq!(opt, Rational::from_integer(2.into()));
    }
}

#[test]
fn tessellation_certificate_matches_the_census() {
    for reps in 2..=6usize {
        let inst = tessellation(reps).unwrap();
        let fs = inst.faces().unwrap();
        let t = quasi_perfect_tiling(&inst.graph, &fs).unwrap();
        let h = reps as i64;
        assert_eq!(t.finite_faces as i64, 3 * h - 2);
        assert_eq!(t.even_faces as i64, h);
        assert_eq!(t.covered_odd, 0);
        assert_eq!(t.tiles.len(), reps);
        assert_eq!(t.certificate(), r(2 * h, 3 * h - 2), "reps={reps}");
        assert!(t.certificate() >= two_thirds());
        let rep = run_primal_dual(&inst).unwrap();
        assert!(rep.iterations.iter().filter_map(|it| it.tiling.as_ref()).all(|t| t.certificate() >= two_thirds()));
    }
}

#[test]
fn zero_cost_nodes_are_handled() {
    let inst = grid(4, 4, CostProfile::Uniform(0, 1), 3).unwrap();
    let rep = run_primal_dual(&inst).unwrap();
    assert!(verify_certificate(&inst, &rep, 16).is_empty());
    assert!(rep.dual_objective >= Rational::zero());
}

#[test]
fn corpus_is_deterministic() {
    for spec in mixed_corpus(24) {
        let inst = spec.build().unwrap();
        assert_eq!(run_primal_dual(&inst).unwrap(), run_primal_dual(&inst).unwrap(), "{spec}");
    }
}

/// About three minutes with optimizations; run with `--ignored`.
#[test]
#[ignore]
fn large_grid_completes_within_the_bound() {
    let inst = grid(50, 50, CostProfile::Uniform(1, 100), 7).unwrap();
    let rep = run_primal_dual(&inst).unwrap();
    assert!(rep.cost <= ratio_bound() * &rep.dual_objective);
    assert!(verify_certificate(&inst, &rep, 0).is_empty());
}
