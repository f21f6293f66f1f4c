//! The primal-dual loop, the pair-aware reverse delete, and independent
//! checks of its output.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::compress::{compress, cycle_preimage, find_low_attachment_even_cycle, HandlePairKey, Piece};
use crate::cycles::{has_even_cycle, is_feasible_ect, residual_graph};
use crate::dual::{blended_coefficients, DualState, HandlePair, Inequality, InequalityKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};
use crate::instance::Instance;
use crate::oracle::exact_ect_with_limit;
use crate::pocket::find_minimal_pocket;
use crate::tiling::{quasi_perfect_tiling, verify_tiling, Tiling};
use crate::Rational;

/// The approximation guarantee, 47/7.
pub fn ratio_bound() -> Rational {
    Rational::new(47.into(), 7.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// A single even cycle with at most two attachment nodes was raised.
    CheapCycle,
    /// Blended inequalities of a tiling of a minimal pocket were raised.
    Tiling,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingStats {
    pub tiles: usize,
    pub finite_faces: usize,
    pub even_faces: usize,
    pub odd_faces: usize,
    pub covered_odd: usize,
    pub beta: Rational,
    pub psi: Rational,
}

impl TilingStats {
    fn of(t: &Tiling) -> TilingStats {
        TilingStats {
            tiles: t.tiles.len(),
            finite_faces: t.finite_faces,
            even_faces: t.even_faces,
            odd_faces: t.odd_faces,
            covered_odd: t.covered_odd,
            beta: t.beta.clone(),
            psi: t.psi.clone(),
        }
    }

    pub fn certificate(&self) -> Rational {
        crate::tiling::certificate(&self.beta, &self.psi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationRecord {
    pub branch: Branch,
    pub residual_nodes: usize,
    pub pocket_nodes: usize,
    pub tiling: Option<TilingStats>,
    /// Increment of every step of the iteration.
    pub epsilons: Vec<Rational>,
    /// Handle pairs whose residuals met during the iteration.
    pub handle_events: usize,
    /// Nodes added to the solution, in insertion order.
    pub added: Vec<NodeId>,
    pub pairs: Vec<(NodeId, NodeId)>,
}

/// Outcome of checking the piece structure of the solution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PieceCheck {
    pub pieces: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    /// Final hitting set, ascending.
    pub solution: Vec<NodeId>,
    pub cost: Rational,
    pub dual_objective: Rational,
    /// Nodes in the order they were added before the reverse delete.
    pub order: Vec<NodeId>,
    pub pairs: Vec<(NodeId, NodeId)>,
    pub inequalities: Vec<Inequality>,
    pub iterations: Vec<IterationRecord>,
    /// Whether a node of infinite cost is in the solution.
    pub infinite_in_solution: bool,
    pub piece_check: PieceCheck,
}

impl SolveReport {
    /// `cost / dual objective`, if the dual objective is positive.
    pub fn ratio(&self) -> Option<Rational> {
        (!self.dual_objective.is_zero()).then(|| &self.cost / &self.dual_objective)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Abort with [`Error::NonTermination`] after this many iterations.
    pub max_iterations: Option<usize>,
}

pub fn run_primal_dual(inst: &Instance) -> Result<SolveReport> {
    run_primal_dual_with(inst, &SolveOptions::default())
}

pub fn run_primal_dual_with(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    let g = inst.effective_graph();
    let base = inst.embedding()?;
    let geometry = inst.geometry();
    let mut ds = DualState::new(&g);
    let mut in_s = NodeSet::new();
    let mut order = Vec::new();
    let mut pairs = Vec::new();
    let mut iterations = Vec::new();
    let mut last_pieces: Vec<Piece> = Vec::new();
    let mut steps = 0usize;
    let mut keys_seen = 0usize;

    loop {
        let gs = residual_graph(&g, &in_s);
        if gs.is_empty() {
            break;
        }
        let it = iterations.len();
        if opts.max_iterations.is_some_and(|m| it >= m) {
            return Err(Error::NonTermination(it));
        }
        let mut record = IterationRecord {
            branch: Branch::CheapCycle,
            residual_nodes: gs.node_count(),
            pocket_nodes: 0,
            tiling: None,
            epsilons: Vec::new(),
            handle_events: 0,
            added: Vec::new(),
            pairs: Vec::new(),
        };
        let tight;
        if let Some(c) = find_low_attachment_even_cycle(&gs) {
            steps += 1;
            let coefficients = c.nodes.iter().map(|&v| (v, Rational::from_integer(1.into()))).collect();
            let i = ds.add(InequalityKind::Cycle, it, coefficients);
            let out = ds.increment_step(&[i], &[])?;
            record.epsilons.push(out.epsilon);
            tight = out.tight;
        } else {
            record.branch = Branch::Tiling;
            let cs = compress(&gs, &base.restrict(&gs))?;
            let pocket = find_minimal_pocket(&cs.g2.graph)?;
            let emb = cs.g2.embedding.restrict(&pocket.graph);
            let fs = cs.g2.faces_of(&pocket.graph, &emb, geometry);
            let tiling = quasi_perfect_tiling(&pocket.graph, &fs)?;
            let problems = verify_tiling(&pocket.graph, &fs, &tiling);
            if !problems.is_empty() {
                return Err(Error::Assertion(format!("tiling check failed: {}", problems.join("; "))));
            }
            record.pocket_nodes = pocket.nodes.len();
            record.tiling = Some(TilingStats::of(&tiling));
            let preimages =
                tiling.tiles.iter().map(|t| cycle_preimage(&cs.g2, &t.cycle)).collect::<Result<Vec<_>>>()?;
            last_pieces = cs.g2.graph.edge_ids().map(|e| cs.g2.piece(e).clone()).collect();

            let mut current: Vec<Option<usize>> = vec![None; preimages.len()];
            let mut handle_pairs: BTreeMap<HandlePairKey, HandlePair> = BTreeMap::new();
            loop {
                steps += 1;
                let limit = g.node_count() * (1 + keys_seen + handle_pairs.len());
                if steps > limit {
                    return Err(Error::NonTermination(limit));
                }
                let mut active = Vec::with_capacity(preimages.len());
                for (k, pieces) in preimages.iter().enumerate() {
                    let b = blended_coefficients(&gs, pieces, &ds.residual, &mut ds.designations)?;
                    for p in b.handle_pairs {
                        handle_pairs.entry(p.key.clone()).or_insert(p);
                    }
                    let idx = match current[k] {
                        Some(i) if ds.inequalities[i].coefficients == b.coefficients => i,
                        _ => ds.add(InequalityKind::Blended, it, b.coefficients),
                    };
                    current[k] = Some(idx);
                    active.push(idx);
                }
                let list: Vec<HandlePair> = handle_pairs.values().cloned().collect();
                let out = ds.increment_step(&active, &list)?;
                record.epsilons.push(out.epsilon);
                if !out.tight.is_empty() {
                    tight = out.tight;
                    break;
                }
                if out.equalized.is_empty() {
                    return Err(Error::Assertion("increment made no node tight and met no handles".into()));
                }
                record.handle_events += out.equalized.len();
            }
            keys_seen += handle_pairs.len();
            for p in handle_pairs.values() {
                let pick = |h: &[NodeId]| h.iter().copied().filter(|v| tight.contains(v)).min();
                if let (Some(a), Some(b)) = (pick(&p.interiors[0]), pick(&p.interiors[1])) {
                    record.pairs.push((a, b));
                }
            }
        }
        // paired nodes enter before unpaired ones of the same batch
        for &(a, b) in &record.pairs {
            record.added.push(a);
            record.added.push(b);
        }
        let mut rest: Vec<NodeId> = tight.iter().copied().filter(|v| !record.added.contains(v)).collect();
        rest.sort_unstable();
        record.added.extend(rest);
        for &v in &record.added {
            in_s.insert(v);
            order.push(v);
        }
        pairs.extend(record.pairs.iter().copied());
        iterations.push(record);
    }

    let kept = reverse_delete(&g, &order, &pairs)?;
    let solution: Vec<NodeId> = kept.iter().copied().collect();
    let cost = g.total_cost(&solution);
    let dual_objective = ds.dual_objective();
    ds.inequalities.retain(|i| !i.y.is_zero());
    let piece_check = PieceCheck { pieces: last_pieces.len(), violations: piece_structure_violations(&last_pieces, &kept) };
    let report = SolveReport {
        infinite_in_solution: solution.iter().any(|v| inst.infinite.contains(v)),
        solution,
        cost,
        dual_objective,
        order,
        pairs,
        inequalities: ds.inequalities,
        iterations,
        piece_check,
    };
    if report.cost > ratio_bound() * &report.dual_objective {
        return Err(Error::Assertion(format!(
            "cost {} exceeds 47/7 times the dual objective {}",
            report.cost, report.dual_objective
        )));
    }
    Ok(report)
}

/// Reverse delete over `order`: unpaired nodes are dropped alone, paired
/// nodes together, whenever the rest stays feasible.
pub fn reverse_delete(g: &Graph, order: &[NodeId], pairs: &[(NodeId, NodeId)]) -> Result<NodeSet> {
    let mut s: NodeSet = order.iter().copied().collect();
    if !is_feasible_ect(g, &s) {
        return Err(Error::InfeasibleInput);
    }
    let mut partner = BTreeMap::new();
    for &(a, b) in pairs {
        partner.insert(a, b);
        partner.insert(b, a);
    }
    for &w in order.iter().rev() {
        if !s.contains(&w) {
            continue;
        }
        match partner.get(&w) {
            Some(&o) => {
                s.remove(&w);
                let had = s.remove(&o);
                if !is_feasible_ect(g, &s) {
                    s.insert(w);
                    if had {
                        s.insert(o);
                    }
                }
            }
            None => {
                s.remove(&w);
                if !is_feasible_ect(g, &s) {
                    s.insert(w);
                }
            }
        }
    }
    Ok(s)
}

/// Which of the four piece-structure cases hold for `piece` and the solution
/// `s` (1: no internal node hit; 2: a single hit, on a cut node; 3: two hits
/// on opposite handles of one elementary cycle; 4: one hit in a handle
/// interior of every elementary cycle and nothing else).
pub fn piece_cases(piece: &Piece, s: &NodeSet) -> Vec<u8> {
    let hits: NodeSet = piece.node_set().intersection(s).copied().collect();
    let internal_hits = piece.internal_nodes().intersection(s).count();
    let mut cases = Vec::new();
    if internal_hits == 0 {
        cases.push(1);
    }
    if hits.len() == 1 && piece.cut_nodes().is_superset(&hits) {
        cases.push(2);
    }
    let per_cycle: Vec<[usize; 2]> = piece
        .elementary_cycles()
        .map(|c| {
            let count = |i: usize| c.handles[i].interior().iter().filter(|v| s.contains(v)).count();
            [count(0), count(1)]
        })
        .collect();
    if hits.len() == 2 && per_cycle.iter().any(|&[a, b]| a == 1 && b == 1) {
        cases.push(3);
    }
    if !per_cycle.is_empty() && per_cycle.iter().all(|&[a, b]| a + b == 1) && hits.len() == per_cycle.len() {
        cases.push(4);
    }
    cases
}

/// Pieces for which not exactly one structure case holds.
pub fn piece_structure_violations(pieces: &[Piece], s: &NodeSet) -> Vec<String> {
    pieces
        .iter()
        .filter_map(|p| {
            let cases = piece_cases(p, s);
            (cases.len() != 1).then(|| format!("piece {:?}->{:?} satisfies cases {cases:?}", p.ends.0, p.ends.1))
        })
        .collect()
}

/// Nodes of `solution` whose removal (alone, or with their pair partner)
/// keeps it feasible.
pub fn minimality_violations(g: &Graph, solution: &NodeSet, pairs: &[(NodeId, NodeId)]) -> Vec<String> {
    let mut partner = BTreeMap::new();
    for &(a, b) in pairs {
        if solution.contains(&a) && solution.contains(&b) {
            partner.insert(a, b);
            partner.insert(b, a);
        }
    }
    let mut out = Vec::new();
    for &w in solution {
        let mut rest = solution.clone();
        rest.remove(&w);
        if let Some(o) = partner.get(&w) {
            rest.remove(o);
        }
        if is_feasible_ect(g, &rest) {
            out.push(format!("node {w} is redundant"));
        }
    }
    out
}

/// Recomputes the dual certificate and the solution from scratch. On
/// instances with at most `oracle_limit` nodes the exact optimum is also
/// compared. Returns the list of failures.
pub fn verify_certificate(inst: &Instance, report: &SolveReport, oracle_limit: usize) -> Vec<String> {
    let g = inst.effective_graph();
    let mut problems = Vec::new();
    let mut load: BTreeMap<NodeId, Rational> = BTreeMap::new();
    let half = Rational::new(1.into(), 2.into());
    let one = Rational::from_integer(1.into());
    let mut dual = Rational::zero();
    for (k, ineq) in report.inequalities.iter().enumerate() {
        if ineq.y < Rational::zero() {
            problems.push(format!("inequality {k} has negative value"));
        }
        dual += &ineq.y;
        for (&v, a) in &ineq.coefficients {
            if !g.has_node(v) {
                problems.push(format!("inequality {k} refers to unknown node {v}"));
                continue;
            }
            if *a != half && *a != one {
                problems.push(format!("inequality {k} has coefficient {a} on node {v}"));
            }
            *load.entry(v).or_insert_with(Rational::zero) += a * &ineq.y;
        }
    }
    for (v, l) in &load {
        if g.has_node(*v) && l > g.cost(*v) {
            problems.push(format!("dual load {l} on node {v} exceeds its cost {}", g.cost(*v)));
        }
    }
    if dual != report.dual_objective {
        problems.push(format!("dual objective {} differs from the recomputed {dual}", report.dual_objective));
    }
    let solution: NodeSet = report.solution.iter().copied().collect();
    if solution.iter().any(|&v| !g.has_node(v)) {
        problems.push("solution refers to unknown nodes".into());
        return problems;
    }
    let cost = g.total_cost(&solution);
    if cost != report.cost {
        problems.push(format!("reported cost {} differs from the recomputed {cost}", report.cost));
    }
    if !is_feasible_ect(&g, &solution) {
        problems.push("solution leaves an even cycle".into());
    }
    if cost > ratio_bound() * &dual {
        problems.push(format!("cost {cost} exceeds 47/7 times the dual objective {dual}"));
    }
    problems.extend(minimality_violations(&g, &solution, &report.pairs));
    if g.node_count() <= oracle_limit {
        match exact_ect_with_limit(&g, oracle_limit) {
            Ok((_, opt)) => {
                if dual > opt {
                    problems.push(format!("dual objective {dual} exceeds the optimum {opt}"));
                }
                if cost < opt {
                    problems.push(format!("cost {cost} is below the optimum {opt}"));
                }
                if cost > ratio_bound() * &opt {
                    problems.push(format!("cost {cost} exceeds 47/7 times the optimum {opt}"));
                }
            }
            Err(e) => problems.push(format!("exact oracle failed: {e}")),
        }
    }
    if !has_even_cycle(&g) && !solution.is_empty() {
        problems.push("instance has no even cycle but the solution is nonempty".into());
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::Point;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn square(costs: [i64; 4]) -> Instance {
        let mut g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        for (v, c) in costs.into_iter().enumerate() {
            g.set_cost(v, r(c));
        }
        let coords = [(0, 0), (1, 0), (1, 1), (0, 1)].iter().map(|&(x, y)| Some(Point::from_ints(x, y))).collect();
        Instance::new(g, coords)
    }

    #[test]
    fn four_cycle() {
        let inst = square([5, 3, 7, 2]);
        let rep = run_primal_dual(&inst).unwrap();
        assert_eq!(rep.solution, vec![3]);
        assert_eq!(rep.cost, r(2));
        assert_eq!(rep.dual_objective, r(2));
        assert_eq!(rep.ratio(), Some(r(1)));
        assert!(verify_certificate(&inst, &rep, 18).is_empty());
    }

    #[test]
    fn no_even_cycle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let coords = [(0, 0), (1, 0), (0, 1)].iter().map(|&(x, y)| Some(Point::from_ints(x, y))).collect();
        let rep = run_primal_dual(&Instance::new(g, coords)).unwrap();
        assert!(rep.solution.is_empty());
        assert_eq!(rep.dual_objective, r(0));
    }

    #[test]
    fn tampering_is_detected() {
        let inst = square([5, 3, 7, 2]);
        let rep = run_primal_dual(&inst).unwrap();
        let mut doubled = rep.clone();
        for i in &mut doubled.inequalities {
            i.y *= r(2);
        }
        doubled.dual_objective *= r(2);
        assert!(!verify_certificate(&inst, &doubled, 0).is_empty());
        let mut dropped = rep.clone();
        dropped.solution.clear();
        dropped.cost = r(0);
        assert!(!verify_certificate(&inst, &dropped, 0).is_empty());
    }

    #[test]
    fn reverse_delete_keeps_last_survivor() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let s = reverse_delete(&g, &[0, 1, 2, 3], &[]).unwrap();
        assert_eq!(s, [0].into_iter().collect());
        assert_eq!(reverse_delete(&g, &[], &[]), Err(Error::InfeasibleInput));
    }

    #[test]
    fn pair_is_kept_when_joint_removal_fails() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let paired = reverse_delete(&g, &[0, 1], &[(0, 1)]).unwrap();
        assert_eq!(paired, [0, 1].into_iter().collect());
        assert!(minimality_violations(&g, &paired, &[(0, 1)]).is_empty());
        let unpaired = reverse_delete(&g, &[0, 1], &[]).unwrap();
        assert_eq!(unpaired, [0].into_iter().collect());
    }
}
