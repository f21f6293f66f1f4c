//! Block (2-connected component) decomposition.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeId, Graph, NodeId, NodeSet, Parity};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Ascending node ids.
    pub nodes: Vec<NodeId>,
    /// Ascending edge ids.
    pub edges: Vec<EdgeId>,
}

/// Shape of a block, as far as cycle parity reasoning is concerned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// A single non-loop edge.
    Bridge,
    /// A single loop.
    Loop,
    /// A cycle of length at least two.
    Cycle,
    /// 2-connected with more edges than nodes; always contains a theta.
    Rich,
}

impl Block {
    pub fn kind(&self, g: &Graph) -> BlockKind {
        if self.edges.len() == 1 {
            if g.edge(self.edges[0]).is_loop() {
                BlockKind::Loop
            } else {
                BlockKind::Bridge
            }
        } else if self.edges.len() == self.nodes.len() {
            BlockKind::Cycle
        } else {
            BlockKind::Rich
        }
    }

    pub fn parity(&self, g: &Graph) -> Parity {
        Parity::sum(self.edges.iter().map(|&e| g.edge(e).parity))
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Blocks ordered by their smallest edge id.
    pub blocks: Vec<Block>,
    pub cut_nodes: NodeSet,
    /// Bipartite block graph as (block index, cut node) pairs.
    pub block_graph: Vec<(usize, NodeId)>,
}

impl BlockDecomposition {
    /// Block indices containing `v`.
    pub fn blocks_of(&self, v: NodeId) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.contains_node(v))
            .map(|(i, _)| i)
            .collect()
    }

    /// Number of cut nodes lying on block `i`.
    pub fn cut_nodes_on(&self, i: usize) -> Vec<NodeId> {
        self.blocks[i]
            .nodes
            .iter()
            .copied()
            .filter(|v| self.cut_nodes.contains(v))
            .collect()
    }
}

struct Frame {
    v: NodeId,
    parent_edge: Option<EdgeId>,
    next: usize,
}

/// Computes blocks, cut nodes and the block graph of `g`.
///
/// Loops form their own single-edge blocks; parallel edges stay together in
/// one block. Isolated nodes belong to no block.
pub fn blocks(g: &Graph) -> BlockDecomposition {
    let n = g.node_bound();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut raw: Vec<Vec<EdgeId>> = Vec::new();

    for root in g.nodes() {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut frames = vec![Frame { v: root, parent_edge: None, next: 0 }];
        while let Some(top) = frames.last_mut() {
            let v = top.v;
            if top.next < g.incident(v).len() {
                let e = g.incident(v)[top.next];
                top.next += 1;
                if Some(e) == top.parent_edge {
                    continue;
                }
                let edge = g.edge(e);
                if edge.is_loop() {
                    raw.push(vec![e]);
                    continue;
                }
                let w = edge.other(v);
                if disc[w] == usize::MAX {
                    edge_stack.push(e);
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    frames.push(Frame { v: w, parent_edge: Some(e), next: 0 });
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                let done = frames.pop().expect("frame");
                if let Some(parent) = frames.last() {
                    let p = parent.v;
                    low[p] = low[p].min(low[done.v]);
                    if low[done.v] >= disc[p] {
                        let pe = done.parent_edge.expect("non-root frame");
                        let mut comp = Vec::new();
                        while let Some(x) = edge_stack.pop() {
                            comp.push(x);
                            if x == pe {
                                break;
                            }
                        }
                        raw.push(comp);
                    }
                }
            }
        }
    }

    let mut blocks: Vec<Block> = raw
        .into_iter()
        .map(|mut edges| {
            edges.sort_unstable();
            let nodes: BTreeSet<NodeId> = edges
                .iter()
                .flat_map(|&e| {
                    let ed = g.edge(e);
                    [ed.u, ed.v]
                })
                .collect();
            Block { nodes: nodes.into_iter().collect(), edges }
        })
        .collect();
    blocks.sort_by_key(|b| b.edges[0]);

    let mut membership: BTreeMap<NodeId, usize> = BTreeMap::new();
    for b in &blocks {
        for &v in &b.nodes {
            *membership.entry(v).or_default() += 1;
        }
    }
    let cut_nodes: NodeSet = membership
        .into_iter()
        .filter(|&(_, c)| c >= 2)
        .map(|(v, _)| v)
        .collect();
    let mut block_graph = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for &v in &b.nodes {
            if cut_nodes.contains(&v) {
                block_graph.push((i, v));
            }
        }
    }
    BlockDecomposition { blocks, cut_nodes, block_graph }
}
