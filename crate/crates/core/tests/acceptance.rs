//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::time::{Duration, Instant};

use ect_core::cycles::{even_cycle_vertices, has_even_cycle};
use ect_core::error::Error;
use ect_core::format::write_report;
use ect_core::generators::{grid, grid_subgraph, handle_chain, mixed_corpus, tessellation, CostProfile, InstanceSpec};
use ect_core::graph::{Graph, NodeSet, Parity};
use ect_core::instance::Instance;
use ect_core::matching::{brute_force_matching, max_matching, tutte_deficiency_witness};
use ect_core::oracle::{enumerate_even_cycles, exact_ect_with_limit};
use ect_core::solver::{ratio_bound, run_primal_dual, verify_certificate, SolveReport};
use ect_core::tiling::{quasi_perfect_tiling, two_thirds};
use ect_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_NODES: usize = 18;

struct Run {
    name: String,
    instance: Instance,
    result: Result<SolveReport, Error>,
}

fn corpus() -> Vec<(String, Instance)> {
    let mut specs = mixed_corpus(180);
    for (w, h) in [(30, 30), (20, 20), (15, 15), (10, 10), (10, 10), (8, 12), (12, 6)] {
        specs.push(InstanceSpec::Grid { width: w, height: h, costs: CostProfile::Uniform(1, 9), seed: (w * h) as u64 });
    }
    for seed in 0..13u64 {
        specs.push(InstanceSpec::GridSubgraph {
            width: 8,
            height: 8,
            keep_percent: 75,
            costs: CostProfile::Uniform(1, 20),
            seed,
        });
    }
    let mut out: Vec<(String, Instance)> = specs.iter().map(|s| (s.to_string(), s.build().unwrap())).collect();
    for seed in 0..40u64 {
        let inst = grid_subgraph(4, 4, 80, CostProfile::Uniform(1, 9), 1000 + seed).unwrap();
        out.push((format!("small grid-subgraph seed={}", 1000 + seed), inst));
    }
    out
}

fn report(lines: &mut Vec<(bool, String)>, ok: bool, text: String) {
    println!("{} {text}", if ok { "PASS" } else { "FAIL" });
    lines.push((ok, text));
}

fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> Graph {
    let n = rng.gen_range(1..=max_nodes);
    let mut g = Graph::with_nodes(n);
    for _ in 0..rng.gen_range(0..=2 * n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            let parity = match rng.gen_range(0..10) {
                0 => Parity::Even,
                1 => Parity::Twin,
                _ => Parity::Odd,
            };
            g.add_edge(u, v, parity);
        }
    }
    g
}

fn simple_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(1..=12);
    let mut g = Graph::with_nodes(n);
    for _ in 0..rng.gen_range(0..=3 * n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && g.edges_between(u, v).is_empty() {
            g.add_edge(u, v, Parity::Odd);
        }
    }
    g
}

fn main() {
    let mut lines = Vec::new();
    let start = Instant::now();
    let runs: Vec<Run> = corpus()
        .into_iter()
        .map(|(name, instance)| {
            let result = run_primal_dual(&instance);
            Run { name, instance, result }
        })
        .collect();
    let elapsed = start.elapsed();

    // 1: ratio against the dual bound on the full corpus.
    let mut bad = Vec::new();
    for r in &runs {
        match &r.result {
            Ok(rep) => {
                let problems = verify_certificate(&r.instance, rep, 0);
                if rep.cost > ratio_bound() * &rep.dual_objective || !problems.is_empty() {
                    bad.push(format!("{}: {problems:?}", r.name));
                }
            }
            Err(e) => bad.push(format!("{}: {e}", r.name)),
        }
    }
    let max_ratio = runs.iter().filter_map(|r| r.result.as_ref().ok()?.ratio()).max().unwrap();
    report(
        &mut lines,
        runs.len() >= 200 && bad.is_empty() && elapsed < Duration::from_secs(300),
        format!(
            "approximation ratio: {} instances, max cost/dual {max_ratio}, bound 47/7, {:.1}s, failures {bad:?}",
            runs.len(),
            elapsed.as_secs_f64()
        ),
    );

    // 2: small instances against the exact optimum.
    let mut compared = 0;
    let mut bad = Vec::new();
    for r in runs.iter().filter(|r| r.instance.graph.node_count() <= ORACLE_NODES) {
        let Ok(rep) = &r.result else { continue };
        let (_, opt) = exact_ect_with_limit(&r.instance.effective_graph(), ORACLE_NODES).unwrap();
        compared += 1;
        if rep.dual_objective > opt || rep.cost < opt || rep.cost > ratio_bound() * &opt {
            bad.push(format!("{}: cost {} dual {} opt {opt}", r.name, rep.cost, rep.dual_objective));
        }
    }
    report(
        &mut lines,
        compared >= 50 && bad.is_empty(),
        format!("exact optimum on small instances: {compared} compared, failures {bad:?}"),
    );

    // 3: tiling certificates, plus the tessellation census.
    let certificates: Vec<Rational> = runs
        .iter()
        .filter_map(|r| r.result.as_ref().ok())
        .flat_map(|rep| rep.iterations.iter().filter_map(|it| it.tiling.as_ref().map(|t| t.certificate())))
        .collect();
    let min_cert = certificates.iter().min().cloned();
    let mut census_ok = true;
    for reps in 2..=6usize {
        let inst = tessellation(reps).unwrap();
        let t = quasi_perfect_tiling(&inst.graph, &inst.faces().unwrap()).unwrap();
        let h = reps as i64;
        census_ok &= t.covered_odd == 0 && t.certificate() == Rational::new((2 * h).into(), (3 * h - 2).into());
    }
    report(
        &mut lines,
        !certificates.is_empty() && certificates.iter().all(|c| *c >= two_thirds()) && census_ok,
        format!(
            "quasi-perfect tilings: {} tilings, min certificate {}, tessellation census {}",
            certificates.len(),
            min_cert.map_or("-".into(), |c| c.to_string()),
            if census_ok { "matches 2H/(3H-2)" } else { "mismatch" }
        ),
    );

    // 4: piece structure of the final solution.
    let checked: usize = runs.iter().filter_map(|r| r.result.as_ref().ok()).map(|rep| rep.piece_check.pieces).sum();
    let violations: Vec<String> = runs
        .iter()
        .filter_map(|r| Some((r, r.result.as_ref().ok()?)))
        .flat_map(|(r, rep)| rep.piece_check.violations.iter().map(move |v| format!("{}: {v}", r.name)))
        .collect();
    report(
        &mut lines,
        checked > 0 && violations.is_empty(),
        format!("piece structure: {checked} pieces checked, violations {violations:?}"),
    );

    // 5: library routines against independent oracles.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let g = simple_graph(&mut rng);
        let m = max_matching(&g);
        let brute = brute_force_matching(&g).unwrap();
        let (_, deficiency) = tutte_deficiency_witness(&g).unwrap();
        if !m.is_valid_in(&g) || m.len() != brute.len() || deficiency != g.node_count() - 2 * m.len() {
            mismatches += 1;
        }
    }
    let mut cycle_mismatches = 0;
    for _ in 0..500 {
        let g = random_graph(&mut rng, 10);
        let even = enumerate_even_cycles(&g).unwrap();
        let on_even: NodeSet = even.iter().flat_map(|c| c.nodes.iter().copied()).collect();
        if has_even_cycle(&g) != !even.is_empty() || even_cycle_vertices(&g) != on_even {
            cycle_mismatches += 1;
        }
    }
    report(
        &mut lines,
        mismatches == 0 && cycle_mismatches == 0,
        format!("oracle equivalence: 1000 matchings ({mismatches} mismatches), 500 even-cycle graphs ({cycle_mismatches} mismatches)"),
    );

    // 6: every pocket candidate with a cycle had an even cycle.
    let pseudo: Vec<&str> = runs
        .iter()
        .filter(|r| matches!(r.result, Err(Error::PseudoPocketWithoutEvenCycle(_))))
        .map(|r| r.name.as_str())
        .collect();
    let pockets: usize = runs
        .iter()
        .filter_map(|r| r.result.as_ref().ok())
        .map(|rep| rep.iterations.iter().filter(|it| it.tiling.is_some()).count())
        .sum();
    report(
        &mut lines,
        pseudo.is_empty() && pockets > 0,
        format!("pocket search: {pockets} pockets found, runs with an odd-only candidate {pseudo:?}"),
    );

    // 7: node pairs defeat the handle-chain adversary.
    let mut chain = Vec::new();
    for k in [1usize, 3] {
        let rep = run_primal_dual(&handle_chain(k).unwrap().instance).unwrap();
        chain.push((k, rep.cost.clone(), rep.cost < Rational::from_integer((2 + k as i64).into())));
    }
    report(
        &mut lines,
        chain.iter().all(|c| c.2),
        format!(
            "handle chain: {}",
            chain.iter().map(|(k, c, _)| format!("k={k} cost {c} vs adversarial {}", 2 + k)).collect::<Vec<_>>().join(", ")
        ),
    );

    // 8: byte-identical reports.
    let mut differing = Vec::new();
    for r in runs.iter().filter(|r| r.instance.graph.node_count() <= 200) {
        let Ok(rep) = &r.result else { continue };
        let again = run_primal_dual(&r.instance).unwrap();
        if write_report(rep, &[]) != write_report(&again, &[]) {
            differing.push(r.name.clone());
        }
    }
    let big = grid(30, 30, CostProfile::Uniform(1, 9), 900).unwrap();
    let big_run = runs.iter().find(|r| r.instance == big).and_then(|r| r.result.as_ref().ok()).unwrap();
    if write_report(big_run, &[]) != write_report(&run_primal_dual(&big).unwrap(), &[]) {
        differing.push("grid 30x30".into());
    }
    report(&mut lines, differing.is_empty(), format!("determinism: reports differing {differing:?}"));

    let failed = lines.iter().filter(|l| !l.0).count();
    println!("acceptance: {} of {} criteria passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
