//! 1- and 2-compression of residual graphs, pieces, and detection of even
//! cycles with at most two attachment nodes.
//!
//! Compressed graphs keep the node ids of the graph they come from. Every
//! compressed edge carries a [`Piece`]: the subgraph of the source graph it
//! stands for, oriented from the edge's `u` end to its `v` end.

use std::collections::BTreeSet;

use crate::blocks::{blocks, BlockKind};
use crate::cycles::{cycle_of_block, Cycle};
use crate::embed::{faces, Dart, Embedding, FaceSet, Point};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId, NodeSet, Parity};

/// A path of the source graph: `edges[i]` joins `nodes[i]` and `nodes[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn first(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn last(&self) -> NodeId {
        *self.nodes.last().expect("nonempty path")
    }

    pub fn interior(&self) -> &[NodeId] {
        if self.nodes.len() <= 2 {
            &[]
        } else {
            &self.nodes[1..self.nodes.len() - 1]
        }
    }

    pub fn reversed(&self) -> Path {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        let mut edges = self.edges.clone();
        edges.reverse();
        Path { nodes, edges }
    }

    pub fn parity(&self, g: &Graph) -> Parity {
        Parity::sum(self.edges.iter().map(|&e| g.edge(e).parity))
    }

    fn append(&mut self, other: &Path) {
        debug_assert_eq!(self.last(), other.first());
        self.nodes.extend_from_slice(&other.nodes[1..]);
        self.edges.extend_from_slice(&other.edges);
    }
}

/// An odd cycle inside a piece, split into two handles between its branch
/// nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryCycle {
    /// Both handles run from `branch.0` to `branch.1`.
    pub branch: (NodeId, NodeId),
    /// `handles[0]` is the handle whose route the compressed edge follows in
    /// the embedding.
    pub handles: [Path; 2],
}

impl ElementaryCycle {
    fn reversed(&self) -> ElementaryCycle {
        ElementaryCycle {
            branch: (self.branch.1, self.branch.0),
            handles: [self.handles[0].reversed(), self.handles[1].reversed()],
        }
    }

    /// Orientation-independent identity of the handle pair.
    pub fn key(&self) -> HandlePairKey {
        let mut a: Vec<EdgeId> = self.handles[0].edges.clone();
        let mut b: Vec<EdgeId> = self.handles[1].edges.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn node_set(&self) -> NodeSet {
        self.handles.iter().flat_map(|h| h.nodes.iter().copied()).collect()
    }
}

/// Handle pair identity: the two sorted handle edge sets, smaller first.
pub type HandlePairKey = (Vec<EdgeId>, Vec<EdgeId>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    Path(Path),
    Cycle(ElementaryCycle),
}

impl Segment {
    fn reversed(&self) -> Segment {
        match self {
            Segment::Path(p) => Segment::Path(p.reversed()),
            Segment::Cycle(c) => Segment::Cycle(c.reversed()),
        }
    }
}

/// The preimage of a compressed edge: a chain of paths and elementary cycles
/// running from `ends.0` to `ends.1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub ends: (NodeId, NodeId),
    pub segments: Vec<Segment>,
}

impl Piece {
    fn from_edge(g: &Graph, e: EdgeId) -> Piece {
        let edge = g.edge(e);
        Piece {
            ends: (edge.u, edge.v),
            segments: vec![Segment::Path(Path { nodes: vec![edge.u, edge.v], edges: vec![e] })],
        }
    }

    pub fn reversed(&self) -> Piece {
        Piece {
            ends: (self.ends.1, self.ends.0),
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    fn concat(&self, other: &Piece) -> Piece {
        debug_assert_eq!(self.ends.1, other.ends.0);
        let mut segments = self.segments.clone();
        for s in &other.segments {
            match (segments.last_mut(), s) {
                (Some(Segment::Path(a)), Segment::Path(b)) => a.append(b),
                _ => segments.push(s.clone()),
            }
        }
        Piece { ends: (self.ends.0, other.ends.1), segments }
    }

    pub fn is_twin(&self) -> bool {
        self.segments.iter().any(|s| matches!(s, Segment::Cycle(_)))
    }

    pub fn elementary_cycles(&self) -> impl Iterator<Item = &ElementaryCycle> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Cycle(c) => Some(c),
            Segment::Path(_) => None,
        })
    }

    pub fn node_set(&self) -> NodeSet {
        let mut out = NodeSet::new();
        for s in &self.segments {
            match s {
                Segment::Path(p) => out.extend(p.nodes.iter().copied()),
                Segment::Cycle(c) => out.extend(c.node_set()),
            }
        }
        out
    }

    pub fn internal_nodes(&self) -> NodeSet {
        let mut out = self.node_set();
        out.remove(&self.ends.0);
        out.remove(&self.ends.1);
        out
    }

    /// Internal nodes separating the two ends: path nodes and branch nodes.
    pub fn cut_nodes(&self) -> NodeSet {
        let interiors: NodeSet = self
            .elementary_cycles()
            .flat_map(|c| c.handles.iter().flat_map(|h| h.interior().iter().copied()))
            .collect();
        self.internal_nodes().difference(&interiors).copied().collect()
    }

    /// Source edges of the piece.
    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        let mut out = BTreeSet::new();
        for s in &self.segments {
            match s {
                Segment::Path(p) => out.extend(p.edges.iter().copied()),
                Segment::Cycle(c) => {
                    for h in &c.handles {
                        out.extend(h.edges.iter().copied());
                    }
                }
            }
        }
        out
    }

    /// Node sequence followed by the compressed edge in the embedding.
    pub fn route(&self) -> Vec<NodeId> {
        let mut out = vec![self.ends.0];
        for s in &self.segments {
            let nodes = match s {
                Segment::Path(p) => &p.nodes,
                Segment::Cycle(c) => &c.handles[0].nodes,
            };
            out.extend_from_slice(&nodes[1..]);
        }
        out
    }

    /// The end-to-end path choosing handle `choice(i)` in the `i`-th
    /// elementary cycle.
    pub fn path_with(&self, mut choice: impl FnMut(usize) -> usize) -> Path {
        let mut out = Path { nodes: vec![self.ends.0], edges: Vec::new() };
        let mut k = 0;
        for s in &self.segments {
            match s {
                Segment::Path(p) => out.append(p),
                Segment::Cycle(c) => {
                    out.append(&c.handles[choice(k)]);
                    k += 1;
                }
            }
        }
        out
    }
}

/// A compressed graph together with its pieces and rotation system.
#[derive(Clone, Debug)]
pub struct Compressed {
    pub graph: Graph,
    pieces: Vec<Option<Piece>>,
    pub embedding: Embedding,
}

impl Compressed {
    pub fn piece(&self, e: EdgeId) -> &Piece {
        self.pieces[e].as_ref().expect("edge has a piece")
    }

    /// Piece of the edge under `d`, oriented from tail to head.
    pub fn piece_along(&self, d: Dart) -> Piece {
        let p = self.piece(d.edge);
        if d.forward {
            p.clone()
        } else {
            p.reversed()
        }
    }

    /// Points traced by a dart, from its tail up to but excluding its head.
    pub fn trace(&self, d: Dart, coords: &[Option<Point>]) -> Vec<Point> {
        let mut route = self.piece(d.edge).route();
        if !d.forward {
            route.reverse();
        }
        route.pop();
        route.into_iter().map(|v| coords[v].clone().expect("coordinates")).collect()
    }

    /// Faces of the compressed graph (or of a subgraph of it with the same
    /// edge ids), with outer faces taken from the source geometry when
    /// coordinates are available.
    pub fn faces_of(&self, sub: &Graph, emb: &Embedding, coords: Option<&[Option<Point>]>) -> FaceSet {
        match coords {
            Some(c) => {
                let trace = |d: Dart| self.trace(d, c);
                faces(sub, emb, Some(&trace))
            }
            None => faces(sub, emb, None),
        }
    }

    fn from_source(g: &Graph, emb: &Embedding) -> Compressed {
        let mut pieces = vec![None; g.edge_bound()];
        for e in g.edge_ids() {
            pieces[e] = Some(Piece::from_edge(g, e));
        }
        Compressed { graph: g.clone(), pieces, embedding: emb.clone() }
    }

    fn rotation_lists(&self) -> Vec<Vec<Dart>> {
        (0..self.graph.node_bound()).map(|v| self.embedding.rotation(v).to_vec()).collect()
    }

    /// Folds every degree-2 node (ascending ids) that is not a lone loop.
    fn fold_all(&mut self) {
        let mut rot = self.rotation_lists();
        let candidates: Vec<NodeId> = self.graph.nodes().collect();
        for v in candidates {
            let inc = self.graph.incident(v);
            if inc.len() != 2 || self.graph.degree(v) != 2 {
                continue;
            }
            let (a, b) = (inc[0].min(inc[1]), inc[0].max(inc[1]));
            let ea = self.graph.edge(a).clone();
            let eb = self.graph.edge(b).clone();
            let x = ea.other(v);
            let y = eb.other(v);
            let pa = if ea.v == v { self.piece(a).clone() } else { self.piece(a).reversed() };
            let pb = if eb.u == v { self.piece(b).clone() } else { self.piece(b).reversed() };
            let dart_a_at_x = Dart::new(a, ea.u == x);
            let dart_b_at_y = Dart::new(b, eb.u == y);
            self.graph.remove_edge(a);
            self.graph.remove_edge(b);
            self.graph.remove_node(v);
            let new = self.graph.add_edge(x, y, ea.parity.concat(eb.parity));
            self.pieces.resize(self.graph.edge_bound(), None);
            self.pieces[new] = Some(pa.concat(&pb));
            self.pieces[a] = None;
            self.pieces[b] = None;
            rot.resize(self.graph.node_bound(), Vec::new());
            for d in rot[x].iter_mut() {
                if *d == dart_a_at_x {
                    *d = Dart::new(new, true);
                }
            }
            for d in rot[y].iter_mut() {
                if *d == dart_b_at_y {
                    *d = Dart::new(new, false);
                }
            }
            rot[v].clear();
        }
        self.embedding = Embedding::from_darts(&self.graph, rot).expect("folding keeps a valid rotation");
    }

    /// Replaces each pair of parallel non-loop edges by a twin edge.
    fn merge_parallel(&mut self) -> Result<()> {
        let mut rot = self.rotation_lists();
        let nodes: Vec<NodeId> = self.graph.nodes().collect();
        for u in nodes {
            let mut by_other: Vec<(NodeId, EdgeId)> = self
                .graph
                .neighbors(u)
                .filter(|&(_, w)| w > u)
                .map(|(e, w)| (w, e))
                .collect();
            by_other.sort_unstable();
            let mut i = 0;
            while i < by_other.len() {
                let w = by_other[i].0;
                let group: Vec<EdgeId> =
                    by_other[i..].iter().take_while(|(x, _)| *x == w).map(|&(_, e)| e).collect();
                i += group.len();
                if group.len() < 2 {
                    continue;
                }
                for (j, &e1) in group.iter().enumerate() {
                    for &e2 in &group[j + 1..] {
                        if self.graph.edge(e1).parity == self.graph.edge(e2).parity {
                            return Err(Error::SameParityParallel(e1, e2));
                        }
                    }
                }
                if group.len() > 2 || group.iter().any(|&e| self.graph.edge(e).parity == Parity::Twin) {
                    return Err(Error::DegenerateGraph(format!("parallel bundle {group:?} cannot be merged")));
                }
                let (e1, e2) = (group[0], group[1]);
                let p1 = self.oriented_path(e1, u);
                let p2 = self.oriented_path(e2, u);
                let cycle = ElementaryCycle { branch: (u, w), handles: [p1, p2] };
                let mut piece = Piece { ends: (u, w), segments: vec![Segment::Cycle(cycle)] };
                if self.graph.edge(e1).u != u {
                    piece = piece.reversed();
                }
                self.pieces[e1] = Some(piece);
                self.pieces[e2] = None;
                self.graph.remove_edge(e2);
                self.graph.set_parity(e1, Parity::Twin);
                for x in [u, w] {
                    rot[x].retain(|d| d.edge != e2);
                }
            }
        }
        self.embedding = Embedding::from_darts(&self.graph, rot).expect("merging keeps a valid rotation");
        Ok(())
    }

    /// The single path behind a 1-compressed edge, oriented to start at `from`.
    fn oriented_path(&self, e: EdgeId, from: NodeId) -> Path {
        let piece = self.piece(e);
        let piece = if piece.ends.0 == from { piece.clone() } else { piece.reversed() };
        match piece.segments.as_slice() {
            [Segment::Path(p)] => p.clone(),
            _ => unreachable!("1-compressed edges are paths"),
        }
    }
}

/// Source graph, its 1-compression and its 2-compression.
#[derive(Clone, Debug)]
pub struct CompressionStack {
    pub source: Graph,
    pub g1: Compressed,
    pub g2: Compressed,
}

/// Folds degree-2 nodes until none remain.
pub fn one_compression(g: &Graph, emb: &Embedding) -> Result<Compressed> {
    if g.is_empty() {
        return Err(Error::DegenerateGraph("empty graph".into()));
    }
    let mut c = Compressed::from_source(g, emb);
    c.fold_all();
    if c.graph.nodes().all(|v| c.graph.degree(v) == 2) {
        return Err(Error::DegenerateGraph("graph is a union of cycles".into()));
    }
    Ok(c)
}

/// Merges parallel pairs of the 1-compression into twin edges and folds again.
pub fn two_compression(g1: &Compressed) -> Result<Compressed> {
    let mut c = g1.clone();
    c.merge_parallel()?;
    c.fold_all();
    Ok(c)
}

pub fn compress(g: &Graph, emb: &Embedding) -> Result<CompressionStack> {
    let g1 = one_compression(g, emb)?;
    let g2 = two_compression(&g1)?;
    Ok(CompressionStack { source: g.clone(), g1, g2 })
}

/// Subdivides every edge once. Returns the new graph and, per edge of `g`,
/// its midpoint node. Subdivision edges of a twin edge are twin; an edge of
/// parity `p` becomes an edge of parity `p` followed by an even edge.
pub fn subdivide(g: &Graph) -> (Graph, Vec<Option<NodeId>>) {
    let mut out = Graph::new();
    for v in 0..g.node_bound() {
        let id = out.add_node(if g.has_node(v) { g.cost(v).clone() } else { Default::default() });
        debug_assert_eq!(id, v);
    }
    for v in 0..g.node_bound() {
        if !g.has_node(v) {
            out.remove_node(v);
        }
    }
    let mut mid = vec![None; g.edge_bound()];
    for (e, edge) in g.edges() {
        let w = out.add_node(Default::default());
        let (p1, p2) = match edge.parity {
            Parity::Twin => (Parity::Twin, Parity::Twin),
            p => (p, Parity::Even),
        };
        out.add_edge(edge.u, w, p1);
        out.add_edge(w, edge.v, p2);
        mid[e] = Some(w);
    }
    (out, mid)
}

/// Nodes of `cycle` with an incident edge outside the cycle.
pub fn attachments(g: &Graph, cycle: &Cycle) -> NodeSet {
    let edges = cycle.edge_set();
    cycle
        .nodes
        .iter()
        .copied()
        .filter(|&v| g.incident(v).iter().any(|e| !edges.contains(e)))
        .collect()
}

/// An even cycle with at most two attachment nodes, if one exists.
///
/// Such a cycle is either a whole component, a cycle block with at most two
/// cut nodes, or the union of two chains of degree-2 nodes between the same
/// pair of nodes (a loop chain when both ends coincide).
pub fn find_low_attachment_even_cycle(g: &Graph) -> Option<Cycle> {
    let d = blocks(g);
    for b in &d.blocks {
        let kind = b.kind(g);
        if matches!(kind, BlockKind::Cycle | BlockKind::Loop)
            && b.parity(g).is_even()
            && d.cut_nodes_on(d.blocks.iter().position(|x| x == b).unwrap()).len() <= 2
        {
            return Some(cycle_of_block(g, b, b.nodes[0]));
        }
    }
    let mut folded = Compressed::from_source(g, &adjacency_rotation(g));
    folded.fold_all();
    let h = &folded.graph;
    let mut best: Option<(Vec<EdgeId>, Cycle)> = None;
    let mut consider = |cycle: Cycle| {
        let mut key = cycle.edges.clone();
        key.sort_unstable();
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, cycle));
        }
    };
    for (e, edge) in h.edges() {
        if edge.is_loop() && edge.parity.is_even() {
            let p = folded.piece(e).route();
            consider(cycle_from_paths(&folded, &[(e, true)], p[0]));
        }
    }
    for u in h.nodes() {
        let inc: Vec<EdgeId> = h.incident(u).to_vec();
        for (i, &e1) in inc.iter().enumerate() {
            for &e2 in &inc[i + 1..] {
                let (a, b) = (h.edge(e1), h.edge(e2));
                if a.is_loop() || b.is_loop() || a.other(u) != b.other(u) || a.other(u) < u {
                    continue;
                }
                if a.parity.concat(b.parity).is_even() {
                    consider(cycle_from_paths(&folded, &[(e1, a.u == u), (e2, b.u != u)], u));
                }
            }
        }
    }
    best.map(|(_, c)| c)
}

/// Rotation system following adjacency order; used where only the
/// combinatorics of folding matter.
fn adjacency_rotation(g: &Graph) -> Embedding {
    let rot = (0..g.node_bound())
        .map(|v| {
            if !g.has_node(v) {
                return Vec::new();
            }
            let mut out = Vec::new();
            for &e in g.incident(v) {
                let edge = g.edge(e);
                if edge.is_loop() {
                    out.push(Dart::new(e, true));
                    out.push(Dart::new(e, false));
                } else {
                    out.push(Dart::new(e, edge.u == v));
                }
            }
            out
        })
        .collect();
    Embedding::from_darts(g, rot).expect("adjacency rotation is valid")
}

/// Source cycle traced by compressed edges given as (edge, forward) darts.
fn cycle_from_paths(c: &Compressed, darts: &[(EdgeId, bool)], start: NodeId) -> Cycle {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for &(e, fwd) in darts {
        let p = c.piece_along(Dart::new(e, fwd)).path_with(|_| 0);
        nodes.extend_from_slice(&p.nodes[..p.nodes.len() - 1]);
        edges.extend_from_slice(&p.edges);
    }
    debug_assert_eq!(nodes[0], start);
    Cycle { nodes, edges }
}

/// Pieces along a cycle of the 2-compression, oriented along the walk.
pub fn cycle_preimage(g2: &Compressed, cycle: &[Dart]) -> Result<Vec<Piece>> {
    let g = &g2.graph;
    if cycle.is_empty() || cycle.iter().any(|d| !g.has_edge(d.edge)) {
        return Err(Error::NotACycle);
    }
    let mut seen = NodeSet::new();
    for (i, d) in cycle.iter().enumerate() {
        let next = cycle[(i + 1) % cycle.len()];
        if d.head(g) != next.tail(g) || !seen.insert(d.tail(g)) {
            return Err(Error::NotACycle);
        }
    }
    let edges: BTreeSet<EdgeId> = cycle.iter().map(|d| d.edge).collect();
    if edges.len() != cycle.len() {
        return Err(Error::NotACycle);
    }
    Ok(cycle.iter().map(|&d| g2.piece_along(d)).collect())
}
