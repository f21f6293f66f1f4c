//! Minimal pockets: connected subgraphs containing an even cycle in which at
//! most two nodes have neighbours outside.

use std::collections::BTreeSet;

use crate::cycles::has_even_cycle;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pocket {
    pub nodes: NodeSet,
    /// Nodes with a neighbour outside the pocket.
    pub boundary: NodeSet,
    /// Induced subgraph of the host graph (same ids).
    pub graph: Graph,
}

/// Nodes of `nodes` with a neighbour outside it.
pub fn boundary_of(g: &Graph, nodes: &NodeSet) -> NodeSet {
    nodes
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).any(|(_, w)| !nodes.contains(&w)))
        .collect()
}

/// Whether the induced subgraph on `nodes` is a pocket of `g`.
pub fn is_pocket(g: &Graph, nodes: &NodeSet) -> bool {
    if nodes.is_empty() || boundary_of(g, nodes).len() > 2 {
        return false;
    }
    let h = g.induced(nodes);
    h.components().len() == 1 && has_even_cycle(&h)
}

struct Dense {
    ids: Vec<NodeId>,
    adj: Vec<Vec<usize>>,
    edge_count_within: Vec<Vec<(usize, usize)>>,
}

impl Dense {
    fn new(g: &Graph) -> Dense {
        let ids: Vec<NodeId> = g.nodes().collect();
        let mut index = vec![usize::MAX; g.node_bound()];
        for (i, &v) in ids.iter().enumerate() {
            index[v] = i;
        }
        let mut adj = vec![Vec::new(); ids.len()];
        let mut edges = vec![Vec::new(); ids.len()];
        for (_, e) in g.edges() {
            let (a, b) = (index[e.u], index[e.v]);
            edges[a].push((a, b));
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
                edges[b].push((b, a));
            }
        }
        Dense { ids, adj, edge_count_within: edges }
    }

    /// Components of the graph minus `removed`.
    fn components(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let n = self.ids.len();
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Articulation points of the graph minus `removed`.
    fn articulation_points(&self, removed: &[bool]) -> Vec<usize> {
        let n = self.ids.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut is_ap = vec![false; n];
        let mut timer = 0;
        for root in 0..n {
            if removed[root] || disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            // (node, parent, next neighbour index, parent edge skipped)
            let mut stack: Vec<(usize, usize, usize, bool)> = vec![(root, usize::MAX, 0, false)];
            while let Some(top) = stack.last_mut() {
                let (v, parent, i, skipped) = *top;
                if i < self.adj[v].len() {
                    top.2 += 1;
                    let w = self.adj[v][i];
                    if removed[w] {
                        continue;
                    }
                    if w == parent && !skipped {
                        top.3 = true;
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, v, 0, false));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if p != root && low[v] >= disc[p] {
                            is_ap[p] = true;
                        }
                    }
                }
            }
            if root_children >= 2 {
                is_ap[root] = true;
            }
        }
        (0..n).filter(|&v| is_ap[v]).collect()
    }

    fn internal_edges(&self, nodes: &[usize]) -> usize {
        let mut inside = vec![false; self.ids.len()];
        for &v in nodes {
            inside[v] = true;
        }
        nodes
            .iter()
            .map(|&v| self.edge_count_within[v].iter().filter(|&&(a, b)| inside[b] && a <= b).count())
            .sum::<usize>()
    }
}

/// Candidate node sets, each separated from the rest of `g` by at most two
/// of its own nodes.
fn candidates(g: &Graph) -> BTreeSet<(usize, Vec<NodeId>)> {
    let d = Dense::new(g);
    let n = d.ids.len();
    let mut out: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut push = |mut set: Vec<usize>| {
        set.sort_unstable();
        set.dedup();
        out.insert((set.len(), set));
    };
    let none = vec![false; n];
    for c in d.components(&none) {
        push(c);
    }
    for (_, edge) in g.edges() {
        let a = d.ids.binary_search(&edge.u).unwrap();
        let b = d.ids.binary_search(&edge.v).unwrap();
        push(vec![a, b]);
    }
    let mut removed = vec![false; n];
    for u in 0..n {
        removed[u] = true;
        for mut k in d.components(&removed) {
            k.push(u);
            push(k);
        }
        for v in d.articulation_points(&removed) {
            removed[v] = true;
            for k in d.components(&removed) {
                let mut set = k.clone();
                for x in [u, v] {
                    if k.iter().any(|&y| d.adj[y].contains(&x)) {
                        set.push(x);
                    }
                }
                push(set);
            }
            removed[v] = false;
        }
        removed[u] = false;
    }
    let keep: Vec<(usize, Vec<usize>)> = out
        .into_iter()
        .filter(|(_, set)| d.internal_edges(set) >= set.len())
        .collect();
    keep.into_iter()
        .map(|(len, set)| (len, set.into_iter().map(|i| d.ids[i]).collect()))
        .collect()
}

/// An inclusion-minimal pocket of `g`: among all candidates separated by at
/// most two nodes, the one with fewest nodes (ties: smallest node-id list).
///
/// Every candidate that contains a cycle must contain an even cycle; a
/// candidate violating this aborts the search.
pub fn find_minimal_pocket(g: &Graph) -> Result<Pocket> {
    if !has_even_cycle(g) {
        return Err(Error::NoEvenCycle);
    }
    for (_, set) in candidates(g) {
        let nodes: NodeSet = set.iter().copied().collect();
        let h = g.induced(&nodes);
        if h.components().len() != 1 {
            continue;
        }
        if !has_even_cycle(&h) {
            return Err(Error::PseudoPocketWithoutEvenCycle(set));
        }
        let boundary = boundary_of(g, &nodes);
        debug_assert!(boundary.len() <= 2);
        return Ok(Pocket { nodes, boundary, graph: h });
    }
    Err(Error::Assertion("no pocket candidate contains an even cycle".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Parity;

    #[test]
    fn whole_even_cycle_component() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let p = find_minimal_pocket(&g).unwrap();
        assert_eq!(p.nodes.len(), 4);
        assert!(p.boundary.is_empty());
    }

    #[test]
    fn twin_loop_is_a_pocket() {
        let mut g = Graph::with_nodes(1);
        g.add_edge(0, 0, Parity::Twin);
        let p = find_minimal_pocket(&g).unwrap();
        assert_eq!(p.nodes, [0].into_iter().collect());
    }

    #[test]
    fn small_side_of_a_two_separation() {
        // two K4s joined by the edges 0-4 and 1-5
        let k4 = |o: usize| [(o, o + 1), (o, o + 2), (o, o + 3), (o + 1, o + 2), (o + 1, o + 3), (o + 2, o + 3)];
        let mut edges: Vec<(usize, usize)> = k4(0).into_iter().chain(k4(4)).collect();
        edges.extend([(0, 4), (1, 5)]);
        let g = Graph::from_edges(8, &edges);
        let p = find_minimal_pocket(&g).unwrap();
        assert!(is_pocket(&g, &p.nodes));
        assert_eq!(p.nodes, (0..4).collect());
        assert_eq!(p.boundary, [0, 1].into_iter().collect());
    }

    #[test]
    fn no_even_cycle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(find_minimal_pocket(&g), Err(Error::NoEvenCycle));
    }

    #[test]
    fn odd_pseudo_pocket_is_reported() {
        // triangle hanging off a K4 at one node: a pseudo-pocket without an
        // even cycle
        let g = Graph::from_edges(
            6,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 3)],
        );
        assert!(matches!(find_minimal_pocket(&g), Err(Error::PseudoPocketWithoutEvenCycle(_))));
    }
}
