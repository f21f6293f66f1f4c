//! Undirected node-weighted multigraph with stable ids and parity-tagged edges.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::Rational;

pub type NodeId = usize;
pub type EdgeId = usize;
pub type NodeSet = BTreeSet<NodeId>;

/// Length parity carried by an edge.
///
/// Plain input edges are `Odd` (length one). Compressed graphs replace paths
/// by single edges and record the parity of the path; a `Twin` edge stands
/// for two parallel paths of different parity, so any cycle through it can be
/// made even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Parity {
    #[default]
    Odd,
    Even,
    Twin,
}

impl Parity {
    pub fn from_len(len: usize) -> Parity {
        if len.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Parity of the concatenation of two walks.
    pub fn concat(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Twin, _) | (_, Parity::Twin) => Parity::Twin,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// Whether a closed walk with this parity counts as even.
    pub fn is_even(self) -> bool {
        matches!(self, Parity::Even | Parity::Twin)
    }

    pub fn sum<I: IntoIterator<Item = Parity>>(iter: I) -> Parity {
        iter.into_iter().fold(Parity::Even, Parity::concat)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Odd => write!(f, "odd"),
            Parity::Even => write!(f, "even"),
            Parity::Twin => write!(f, "twin"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub parity: Parity,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `x`. For loops this is `x` itself.
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            debug_assert_eq!(self.v, x);
            self.u
        }
    }
}

/// Multigraph whose node and edge ids are stable slots.
///
/// Removing a node or edge vacates its slot; ids are never handed out again,
/// so subgraphs and compressed graphs can keep referring to the ids of the
/// graph they were derived from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    costs: Vec<Option<Rational>>,
    edges: Vec<Option<Edge>>,
    adj: Vec<Vec<EdgeId>>,
    node_count: usize,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    /// Graph on nodes `0..n` with zero costs and no edges.
    pub fn with_nodes(n: usize) -> Graph {
        let mut g = Graph::new();
        for _ in 0..n {
            g.add_node(Rational::zero());
        }
        g
    }

    /// Builds a graph on nodes `0..n` from an edge list of plain (odd) edges.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
        let mut g = Graph::with_nodes(n);
        for &(u, v) in edges {
            g.add_edge(u, v, Parity::Odd);
        }
        g
    }

    pub fn add_node(&mut self, cost: Rational) -> NodeId {
        let id = self.costs.len();
        self.costs.push(Some(cost));
        self.adj.push(Vec::new());
        self.node_count += 1;
        id
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, parity: Parity) -> EdgeId {
        assert!(self.has_node(u) && self.has_node(v), "edge endpoint missing");
        let id = self.edges.len();
        self.edges.push(Some(Edge { u, v, parity }));
        self.adj[u].push(id);
        if u != v {
            self.adj[v].push(id);
        }
        self.edge_count += 1;
        id
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Option<Edge> {
        let edge = self.edges.get_mut(e)?.take()?;
        self.adj[edge.u].retain(|&x| x != e);
        if edge.v != edge.u {
            self.adj[edge.v].retain(|&x| x != e);
        }
        self.edge_count -= 1;
        Some(edge)
    }

    pub fn remove_node(&mut self, v: NodeId) {
        if !self.has_node(v) {
            return;
        }
        for e in std::mem::take(&mut self.adj[v]) {
            if let Some(edge) = self.edges[e].take() {
                let w = edge.other(v);
                if w != v {
                    self.adj[w].retain(|&x| x != e);
                }
                self.edge_count -= 1;
            }
        }
        self.costs[v] = None;
        self.node_count -= 1;
    }

    pub fn has_node(&self, v: NodeId) -> bool {
        matches!(self.costs.get(v), Some(Some(_)))
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(e), Some(Some(_)))
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.node_count == 0
    }

    /// One past the largest node id ever allocated.
    pub fn node_bound(&self) -> usize {
        self.costs.len()
    }

    /// One past the largest edge id ever allocated.
    pub fn edge_bound(&self) -> usize {
        self.edges.len()
    }

    /// Node ids in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.costs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|_| i))
    }

    /// Edge ids in ascending order.
    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.as_ref().map(|_| i))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.as_ref().map(|e| (i, e)))
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        self.edges[e].as_ref().expect("no such edge")
    }

    pub fn try_edge(&self, e: EdgeId) -> Option<&Edge> {
        self.edges.get(e).and_then(|e| e.as_ref())
    }

    pub fn set_parity(&mut self, e: EdgeId, parity: Parity) {
        if let Some(edge) = self.edges[e].as_mut() {
            edge.parity = parity;
        }
    }

    pub fn cost(&self, v: NodeId) -> &Rational {
        self.costs[v].as_ref().expect("no such node")
    }

    pub fn set_cost(&mut self, v: NodeId, cost: Rational) {
        assert!(self.has_node(v));
        self.costs[v] = Some(cost);
    }

    /// Incident edge ids of `v` in insertion order. Loops are listed once.
    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        &self.adj[v]
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v]
            .iter()
            .map(|&e| if self.edge(e).is_loop() { 2 } else { 1 })
            .sum()
    }

    /// Neighbours reached over each incident edge (with repetition for
    /// parallel edges; a loop yields `v` once).
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (EdgeId, NodeId)> + '_ {
        self.adj[v].iter().map(move |&e| (e, self.edge(e).other(v)))
    }

    /// Edge ids joining `u` and `v`.
    pub fn edges_between(&self, u: NodeId, v: NodeId) -> Vec<EdgeId> {
        self.adj[u]
            .iter()
            .copied()
            .filter(|&e| self.edge(e).other(u) == v)
            .collect()
    }

    /// Subgraph induced by `keep`, preserving ids.
    pub fn induced(&self, keep: &NodeSet) -> Graph {
        let mut g = self.clone();
        let drop: Vec<NodeId> = self.nodes().filter(|v| !keep.contains(v)).collect();
        for v in drop {
            g.remove_node(v);
        }
        g
    }

    /// Subgraph consisting of the given edges and their endpoints.
    pub fn edge_subgraph(&self, edge_ids: &[EdgeId]) -> Graph {
        let mut costs = vec![None; self.node_bound()];
        let mut edges = vec![None; self.edge_bound()];
        let mut adj = vec![Vec::new(); self.node_bound()];
        let mut node_count = 0;
        for &e in edge_ids {
            let edge = self.edge(e).clone();
            for x in [edge.u, edge.v] {
                if costs[x].is_none() {
                    costs[x] = self.costs[x].clone();
                    node_count += 1;
                }
            }
            adj[edge.u].push(e);
            if edge.v != edge.u {
                adj[edge.v].push(e);
            }
            edges[e] = Some(edge);
        }
        Graph { costs, edges, adj, node_count, edge_count: edge_ids.len() }
    }

    /// `self - s`, preserving ids.
    pub fn without(&self, s: &NodeSet) -> Graph {
        let mut g = self.clone();
        for &v in s {
            g.remove_node(v);
        }
        g
    }

    pub fn node_set(&self) -> NodeSet {
        self.nodes().collect()
    }

    pub fn total_cost<'a, I: IntoIterator<Item = &'a NodeId>>(&self, nodes: I) -> Rational {
        nodes
            .into_iter()
            .fold(Rational::zero(), |acc, &v| acc + self.cost(v))
    }

    /// Connected components as ascending node lists, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.node_bound()];
        let mut out = Vec::new();
        for s in self.nodes() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for (_, y) in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Checks the structural invariants; used by tests and parsers.
    pub fn validate(&self) -> Result<(), String> {
        let mut count = 0;
        for (e, edge) in self.edges() {
            count += 1;
            if !self.has_node(edge.u) || !self.has_node(edge.v) {
                return Err(format!("edge {e} references a missing node"));
            }
            if !self.adj[edge.u].contains(&e) || !self.adj[edge.v].contains(&e) {
                return Err(format!("edge {e} missing from adjacency"));
            }
        }
        if count != self.edge_count {
            return Err("edge count out of sync".into());
        }
        for v in self.nodes() {
            if *self.cost(v) < Rational::zero() {
                return Err(format!("node {v} has negative cost"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_algebra() {
        assert_eq!(Parity::Odd.concat(Parity::Odd), Parity::Even);
        assert_eq!(Parity::Odd.concat(Parity::Even), Parity::Odd);
        assert_eq!(Parity::Even.concat(Parity::Twin), Parity::Twin);
        assert_eq!(Parity::sum([Parity::Odd; 5]), Parity::Odd);
        assert_eq!(Parity::sum([Parity::Odd; 4]), Parity::Even);
        assert!(Parity::Twin.is_even());
    }

    #[test]
    fn removal_keeps_ids_stable() {
        let mut g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        g.remove_node(1);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge_ids().collect::<Vec<_>>(), vec![2, 3]);
        let e = g.add_edge(0, 2, Parity::Odd);
        assert_eq!(e, 4);
        g.validate().unwrap();
    }

    #[test]
    fn loops_count_twice_in_degree() {
        let mut g = Graph::with_nodes(2);
        g.add_edge(0, 0, Parity::Twin);
        g.add_edge(0, 1, Parity::Odd);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(1), 1);
        g.remove_node(0);
        assert_eq!(g.edge_count(), 0);
        g.validate().unwrap();
    }
}
