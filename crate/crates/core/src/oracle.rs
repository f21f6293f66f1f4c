//! Exact reference solvers for small instances.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::cycles::{find_even_cycle, has_even_cycle, Cycle};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId, NodeSet};
use crate::Rational;

/// Default size guard for [`exact_ect`].
pub const EXACT_NODE_LIMIT: usize = 22;
/// Size guard for cycle enumeration.
pub const ENUMERATION_NODE_LIMIT: usize = 12;
/// Size guard for exhaustive subset search.
pub const EXHAUSTIVE_NODE_LIMIT: usize = 20;

/// Every simple cycle of `g` (loops and 2-cycles of parallel edges included).
pub fn enumerate_cycles(g: &Graph) -> Result<Vec<Cycle>> {
    if g.node_count() > ENUMERATION_NODE_LIMIT {
        return Err(Error::TooLarge { size: g.node_count(), limit: ENUMERATION_NODE_LIMIT });
    }
    let mut seen: BTreeSet<Vec<EdgeId>> = BTreeSet::new();
    let mut out = Vec::new();
    for s in g.nodes() {
        for &e in g.incident(s) {
            if g.edge(e).is_loop() && seen.insert(vec![e]) {
                out.push(Cycle { nodes: vec![s], edges: vec![e] });
            }
        }
        let mut on_path = vec![false; g.node_bound()];
        on_path[s] = true;
        let mut nodes = vec![s];
        let mut edges = Vec::new();
        extend_paths(g, s, &mut on_path, &mut nodes, &mut edges, &mut seen, &mut out);
    }
    Ok(out)
}

fn extend_paths(
    g: &Graph,
    s: NodeId,
    on_path: &mut [bool],
    nodes: &mut Vec<NodeId>,
    edges: &mut Vec<EdgeId>,
    seen: &mut BTreeSet<Vec<EdgeId>>,
    out: &mut Vec<Cycle>,
) {
    let x = *nodes.last().unwrap();
    for &e in g.incident(x) {
        let edge = g.edge(e);
        if edge.is_loop() || edges.last() == Some(&e) {
            continue;
        }
        let y = edge.other(x);
        if y == s && !edges.is_empty() {
            let mut key: Vec<EdgeId> = edges.clone();
            key.push(e);
            key.sort_unstable();
            if seen.insert(key) {
                let mut cyc_edges = edges.clone();
                cyc_edges.push(e);
                out.push(Cycle { nodes: nodes.clone(), edges: cyc_edges });
            }
        } else if y > s && !on_path[y] {
            on_path[y] = true;
            nodes.push(y);
            edges.push(e);
            extend_paths(g, s, on_path, nodes, edges, seen, out);
            edges.pop();
            nodes.pop();
            on_path[y] = false;
        }
    }
}

/// Every even simple cycle of `g`.
pub fn enumerate_even_cycles(g: &Graph) -> Result<Vec<Cycle>> {
    Ok(enumerate_cycles(g)?
        .into_iter()
        .filter(|c| c.parity(g).is_even())
        .collect())
}

/// Minimum-cost even cycle transversal by branch and bound over the nodes of
/// an unhit even cycle.
pub fn exact_ect(g: &Graph) -> Result<(NodeSet, Rational)> {
    exact_ect_with_limit(g, EXACT_NODE_LIMIT)
}

pub fn exact_ect_with_limit(g: &Graph, limit: usize) -> Result<(NodeSet, Rational)> {
    if g.node_count() > limit {
        return Err(Error::TooLarge { size: g.node_count(), limit });
    }
    let all = g.node_set();
    let mut best = (g.total_cost(&all), all);
    let mut chosen = NodeSet::new();
    let mut forbidden = vec![false; g.node_bound()];
    branch(g, &mut chosen, &mut forbidden, Rational::zero(), &mut best);
    Ok((best.1, best.0))
}

fn branch(
    g: &Graph,
    chosen: &mut NodeSet,
    forbidden: &mut [bool],
    cost: Rational,
    best: &mut (Rational, NodeSet),
) {
    let rest = g.without(chosen);
    let Some(cycle) = find_even_cycle(&rest) else {
        if cost < best.0 || (cost == best.0 && *chosen < best.1) {
            *best = (cost, chosen.clone());
        }
        return;
    };
    let mut candidates: Vec<NodeId> = cycle.nodes.iter().copied().filter(|&v| !forbidden[v]).collect();
    candidates.sort_by(|&a, &b| g.cost(a).cmp(g.cost(b)).then(a.cmp(&b)));
    let mut newly_forbidden = Vec::new();
    for v in candidates {
        let next = &cost + g.cost(v);
        if next <= best.0 {
            chosen.insert(v);
            branch(g, chosen, forbidden, next, best);
            chosen.remove(&v);
        }
        forbidden[v] = true;
        newly_forbidden.push(v);
    }
    for v in newly_forbidden {
        forbidden[v] = false;
    }
}

/// Minimum-cost transversal by trying every node subset. Independent of the
/// branch-and-bound search; used to cross-check it.
pub fn exhaustive_ect(g: &Graph) -> Result<(NodeSet, Rational)> {
    let n = g.node_count();
    if n > EXHAUSTIVE_NODE_LIMIT {
        return Err(Error::TooLarge { size: n, limit: EXHAUSTIVE_NODE_LIMIT });
    }
    let ids: Vec<NodeId> = g.nodes().collect();
    let mut best: Option<(Rational, NodeSet)> = None;
    for mask in 0u32..(1u32 << n) {
        let set: NodeSet = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
        let cost = g.total_cost(&set);
        if best.as_ref().is_some_and(|(c, s)| (c, s) <= (&cost, &set)) {
            continue;
        }
        if !has_even_cycle(&g.without(&set)) {
            best = Some((cost, set));
        }
    }
    let (cost, set) = best.expect("the full node set is feasible");
    Ok((set, cost))
}
