//! Even-cycle reasoning: existence, membership, witnesses, residual graphs
//! and transversal feasibility.
//!
//! All answers are derived from the block decomposition. A block that is 2-connected
//! but not a cycle always contains a theta subgraph, and two of the three
//! paths of a theta have equal parity, so such a block contains an even cycle.
//! Inside such a block every node of degree at least three lies on an even
//! cycle; a node on a chain of degree-2 nodes between branch nodes `p`, `q`
//! lies on one exactly when the rest of the block offers a `p`-`q` path of the
//! chain's parity.

use std::collections::{BTreeSet, VecDeque};

use crate::blocks::{blocks, Block, BlockKind};
use crate::graph::{EdgeId, Graph, NodeId, NodeSet, Parity};

/// A cycle given as a closed walk: `edges[i]` joins `nodes[i]` and
/// `nodes[(i + 1) % len]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn parity(&self, g: &Graph) -> Parity {
        Parity::sum(self.edges.iter().map(|&e| g.edge(e).parity))
    }

    pub fn node_set(&self) -> NodeSet {
        self.nodes.iter().copied().collect()
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    /// Checks that the walk is a simple closed walk of `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let k = self.nodes.len();
        if k == 0 || k != self.edges.len() {
            return false;
        }
        if self.node_set().len() != k || self.edge_set().len() != k {
            return false;
        }
        (0..k).all(|i| {
            g.try_edge(self.edges[i]).is_some_and(|e| {
                let (a, b) = (self.nodes[i], self.nodes[(i + 1) % k]);
                (e.u == a && e.v == b) || (e.u == b && e.v == a)
            })
        })
    }
}

/// Parities realisable by some walk, as a two-bit mask: bit 0 even, bit 1 odd.
type ParityMask = u8;
const EVEN_BIT: ParityMask = 1;
const ODD_BIT: ParityMask = 2;
const BOTH: ParityMask = 3;

fn mask_of(p: Parity) -> ParityMask {
    match p {
        Parity::Even => EVEN_BIT,
        Parity::Odd => ODD_BIT,
        Parity::Twin => BOTH,
    }
}

fn combine(a: ParityMask, b: ParityMask) -> ParityMask {
    let mut out = 0;
    for (x, bx) in [(0u8, EVEN_BIT), (1, ODD_BIT)] {
        for (y, by) in [(0u8, EVEN_BIT), (1, ODD_BIT)] {
            if a & bx != 0 && b & by != 0 {
                out |= if x ^ y == 0 { EVEN_BIT } else { ODD_BIT };
            }
        }
    }
    out
}

/// True iff `g` contains a cycle that is even (twin edges count as even).
pub fn has_even_cycle(g: &Graph) -> bool {
    let d = blocks(g);
    d.blocks.iter().any(|b| block_has_even_cycle(g, b))
}

fn block_has_even_cycle(g: &Graph, b: &Block) -> bool {
    match b.kind(g) {
        BlockKind::Bridge => false,
        BlockKind::Loop | BlockKind::Cycle => b.parity(g).is_even(),
        BlockKind::Rich => true,
    }
}

/// Exactly the nodes of `g` that lie on at least one even cycle.
pub fn even_cycle_vertices(g: &Graph) -> NodeSet {
    let d = blocks(g);
    let mut out = NodeSet::new();
    for b in &d.blocks {
        match b.kind(g) {
            BlockKind::Bridge => {}
            BlockKind::Loop | BlockKind::Cycle => {
                if b.parity(g).is_even() {
                    out.extend(b.nodes.iter().copied());
                }
            }
            BlockKind::Rich => out.extend(rich_block_even_nodes(g, b)),
        }
    }
    out
}

struct Chain {
    ends: (NodeId, NodeId),
    interior: Vec<NodeId>,
    parity: Parity,
}

/// Maximal paths of degree-2 nodes inside a rich block.
fn chains(bg: &Graph) -> Vec<Chain> {
    let mut seen = vec![false; bg.node_bound()];
    let mut out = Vec::new();
    for p in bg.nodes() {
        if bg.degree(p) < 3 {
            continue;
        }
        for &e0 in bg.incident(p) {
            let first = bg.edge(e0).other(p);
            if bg.degree(first) != 2 || seen[first] {
                continue;
            }
            let mut interior = Vec::new();
            let mut parity = bg.edge(e0).parity;
            let mut prev_edge = e0;
            let mut cur = first;
            while bg.degree(cur) == 2 {
                seen[cur] = true;
                interior.push(cur);
                let next_edge = *bg
                    .incident(cur)
                    .iter()
                    .find(|&&e| e != prev_edge)
                    .expect("degree-2 node has a second edge");
                parity = parity.concat(bg.edge(next_edge).parity);
                cur = bg.edge(next_edge).other(cur);
                prev_edge = next_edge;
            }
            out.push(Chain { ends: (p, cur), interior, parity });
        }
    }
    out
}

fn rich_block_even_nodes(g: &Graph, b: &Block) -> NodeSet {
    let bg = g.edge_subgraph(&b.edges);
    let mut out: NodeSet = bg.nodes().filter(|&v| bg.degree(v) >= 3).collect();
    for chain in chains(&bg) {
        let qualifies = chain.parity == Parity::Twin || {
            let mut rest = bg.clone();
            for &x in &chain.interior {
                rest.remove_node(x);
            }
            let mask = path_parities(&rest, chain.ends.0, chain.ends.1);
            mask & mask_of(chain.parity) != 0
        };
        if qualifies {
            out.extend(chain.interior.iter().copied());
        }
    }
    out
}

/// Parities of simple `s`-`t` paths in a connected graph, `s != t`.
fn path_parities(g: &Graph, s: NodeId, t: NodeId) -> ParityMask {
    let d = blocks(g);
    // Block-cut tree: vertices 0..B are blocks, cut node c maps to B + index.
    let nb = d.blocks.len();
    let cuts: Vec<NodeId> = d.cut_nodes.iter().copied().collect();
    let cut_index = |v: NodeId| cuts.binary_search(&v).ok().map(|i| nb + i);
    let mut tree = vec![Vec::new(); nb + cuts.len()];
    for &(bi, c) in &d.block_graph {
        let ci = cut_index(c).expect("cut node");
        tree[bi].push(ci);
        tree[ci].push(bi);
    }
    let locate = |v: NodeId| -> Option<usize> {
        cut_index(v).or_else(|| d.blocks.iter().position(|b| b.contains_node(v)))
    };
    let (Some(start), Some(goal)) = (locate(s), locate(t)) else {
        return 0;
    };
    let mut prev = vec![usize::MAX; tree.len()];
    prev[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if x == goal {
            break;
        }
        for &y in &tree[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    if prev[goal] == usize::MAX {
        return 0;
    }
    let mut path = vec![goal];
    while *path.last().unwrap() != start {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();

    let mut mask = EVEN_BIT;
    let mut entry = s;
    for (i, &x) in path.iter().enumerate() {
        if x >= nb {
            entry = cuts[x - nb];
            continue;
        }
        let exit = match path.get(i + 1) {
            Some(&c) => cuts[c - nb],
            None => t,
        };
        mask = combine(mask, block_path_parities(g, &d.blocks[x], entry, exit));
    }
    mask
}

fn block_path_parities(g: &Graph, b: &Block, s: NodeId, t: NodeId) -> ParityMask {
    if s == t {
        return EVEN_BIT;
    }
    match b.kind(g) {
        BlockKind::Bridge => mask_of(g.edge(b.edges[0]).parity),
        BlockKind::Loop => 0,
        BlockKind::Cycle => {
            let cyc = cycle_of_block(g, b, s);
            let k = cyc.len();
            let pos = cyc.nodes.iter().position(|&x| x == t).expect("t on cycle");
            let arc1 = Parity::sum(cyc.edges[..pos].iter().map(|&e| g.edge(e).parity));
            let arc2 = Parity::sum(cyc.edges[pos..k].iter().map(|&e| g.edge(e).parity));
            mask_of(arc1) | mask_of(arc2)
        }
        BlockKind::Rich => {
            if b.edges.iter().any(|&e| g.edge(e).parity == Parity::Twin) {
                return BOTH;
            }
            match two_colour(g, b) {
                Some(colour) => {
                    let c = |v: NodeId| colour[b.nodes.binary_search(&v).unwrap()];
                    if c(s) == c(t) {
                        EVEN_BIT
                    } else {
                        ODD_BIT
                    }
                }
                None => BOTH,
            }
        }
    }
}

/// Parity-respecting 2-colouring of a block (odd edges flip colour, even
/// edges keep it); `None` if the block contains an odd cycle.
fn two_colour(g: &Graph, b: &Block) -> Option<Vec<u8>> {
    let idx = |v: NodeId| b.nodes.binary_search(&v).unwrap();
    let mut colour = vec![u8::MAX; b.nodes.len()];
    let in_block: BTreeSet<EdgeId> = b.edges.iter().copied().collect();
    colour[0] = 0;
    let mut stack = vec![b.nodes[0]];
    while let Some(x) = stack.pop() {
        let cx = colour[idx(x)];
        for &e in g.incident(x) {
            if !in_block.contains(&e) {
                continue;
            }
            let edge = g.edge(e);
            let y = edge.other(x);
            let want = match edge.parity {
                Parity::Odd => cx ^ 1,
                Parity::Even => cx,
                Parity::Twin => return None,
            };
            let iy = idx(y);
            if colour[iy] == u8::MAX {
                colour[iy] = want;
                stack.push(y);
            } else if colour[iy] != want {
                return None;
            }
        }
    }
    Some(colour)
}

/// Walks a cycle block starting at `start`.
pub(crate) fn cycle_of_block(g: &Graph, b: &Block, start: NodeId) -> Cycle {
    let in_block: BTreeSet<EdgeId> = b.edges.iter().copied().collect();
    let mut nodes = vec![start];
    let mut edges = Vec::new();
    let mut cur = start;
    let mut prev_edge = None;
    loop {
        let e = *g
            .incident(cur)
            .iter()
            .find(|&&e| in_block.contains(&e) && Some(e) != prev_edge)
            .expect("cycle continues");
        edges.push(e);
        let next = g.edge(e).other(cur);
        if next == start {
            break;
        }
        nodes.push(next);
        prev_edge = Some(e);
        cur = next;
    }
    Cycle { nodes, edges }
}

/// Some even cycle of `g`, if one exists. Deterministic: the first block (by
/// smallest edge id) containing an even cycle is used.
pub fn find_even_cycle(g: &Graph) -> Option<Cycle> {
    let d = blocks(g);
    for b in &d.blocks {
        match b.kind(g) {
            BlockKind::Bridge => {}
            BlockKind::Loop => {
                let e = b.edges[0];
                if g.edge(e).parity.is_even() {
                    return Some(Cycle { nodes: vec![g.edge(e).u], edges: vec![e] });
                }
            }
            BlockKind::Cycle => {
                if b.parity(g).is_even() {
                    return Some(cycle_of_block(g, b, b.nodes[0]));
                }
            }
            BlockKind::Rich => return Some(theta_even_cycle(g, b)),
        }
    }
    None
}

fn theta_even_cycle(g: &Graph, b: &Block) -> Cycle {
    let bg = g.edge_subgraph(&b.edges);
    let base = any_cycle(&bg).expect("rich block has a cycle");
    let on_cycle: NodeSet = base.node_set();
    let cycle_edges = base.edge_set();

    // An ear: a path leaving the cycle at `c` and returning at another node.
    let mut ear: Option<(usize, Vec<NodeId>, Vec<EdgeId>)> = None;
    'outer: for (ci, &c) in base.nodes.iter().enumerate() {
        for &e in bg.incident(c) {
            if cycle_edges.contains(&e) {
                continue;
            }
            let y = bg.edge(e).other(c);
            if on_cycle.contains(&y) {
                ear = Some((ci, vec![c, y], vec![e]));
                break 'outer;
            }
            let mut prev: Vec<Option<(NodeId, EdgeId)>> = vec![None; bg.node_bound()];
            let mut visited = vec![false; bg.node_bound()];
            visited[y] = true;
            visited[c] = true;
            let mut queue = VecDeque::from([y]);
            while let Some(x) = queue.pop_front() {
                for &f in bg.incident(x) {
                    let z = bg.edge(f).other(x);
                    if visited[z] {
                        continue;
                    }
                    visited[z] = true;
                    prev[z] = Some((x, f));
                    if on_cycle.contains(&z) {
                        let mut nodes = vec![z];
                        let mut edges = Vec::new();
                        let mut cur = z;
                        while let Some((p, f)) = prev[cur] {
                            edges.push(f);
                            nodes.push(p);
                            cur = p;
                        }
                        edges.push(e);
                        nodes.push(c);
                        nodes.reverse();
                        edges.reverse();
                        ear = Some((ci, nodes, edges));
                        break 'outer;
                    }
                    queue.push_back(z);
                }
            }
        }
    }
    let (ci, ear_nodes, ear_edges) = ear.expect("2-connected non-cycle block has an ear");
    let d = *ear_nodes.last().unwrap();
    let k = base.len();
    let di = base.nodes.iter().position(|&x| x == d).unwrap();

    // arc1: c -> d forward along the base cycle; arc2: d -> c forward.
    let walk = |from: usize, to: usize| -> (Vec<NodeId>, Vec<EdgeId>) {
        let mut nodes = vec![base.nodes[from]];
        let mut edges = Vec::new();
        let mut i = from;
        while i != to {
            edges.push(base.edges[i]);
            i = (i + 1) % k;
            nodes.push(base.nodes[i]);
        }
        (nodes, edges)
    };
    let arc1 = walk(ci, di);
    let arc2 = walk(di, ci);
    let par = |edges: &[EdgeId]| Parity::sum(edges.iter().map(|&e| g.edge(e).parity));
    let (p1, p2, pe) = (par(&arc1.1), par(&arc2.1), par(&ear_edges));

    // Reverse of a c->d path as a d->c path.
    let rev = |(nodes, edges): (Vec<NodeId>, Vec<EdgeId>)| {
        let mut n = nodes;
        let mut e = edges;
        n.reverse();
        e.reverse();
        (n, e)
    };
    let ear_path = (ear_nodes, ear_edges);
    let (first, second) = if p1.concat(pe).is_even() {
        (arc1, rev(ear_path))
    } else if p2.concat(pe).is_even() {
        (ear_path, arc2)
    } else {
        debug_assert!(p1.concat(p2).is_even());
        (arc1, arc2)
    };
    let mut nodes = first.0;
    nodes.pop();
    let mut edges = first.1;
    let mut tail_nodes = second.0;
    tail_nodes.pop();
    nodes.extend(tail_nodes);
    edges.extend(second.1);
    Cycle { nodes, edges }
}

/// Some cycle of `g` found by depth-first search, ignoring loops.
fn any_cycle(g: &Graph) -> Option<Cycle> {
    let n = g.node_bound();
    let mut depth = vec![usize::MAX; n];
    let mut parent: Vec<Option<(NodeId, EdgeId)>> = vec![None; n];
    for root in g.nodes() {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![(root, None::<EdgeId>, 0usize)];
        while let Some(&mut (v, pe, ref mut next)) = stack.last_mut() {
            if *next >= g.incident(v).len() {
                stack.pop();
                continue;
            }
            let e = g.incident(v)[*next];
            *next += 1;
            if Some(e) == pe || g.edge(e).is_loop() {
                continue;
            }
            let w = g.edge(e).other(v);
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((v, e));
                stack.push((w, Some(e), 0));
            } else if depth[w] < depth[v] {
                let mut nodes = vec![v];
                let mut edges = Vec::new();
                let mut cur = v;
                while cur != w {
                    let (p, f) = parent[cur].unwrap();
                    edges.push(f);
                    nodes.push(p);
                    cur = p;
                }
                // nodes: v .. w along tree edges; close with e from w to v.
                nodes.reverse();
                edges.reverse();
                edges.push(e);
                return Some(Cycle { nodes, edges });
            }
        }
    }
    None
}

/// `G^S`: `g - s` with every node that lies on no even cycle removed.
pub fn residual_graph(g: &Graph, s: &NodeSet) -> Graph {
    let h = g.without(s);
    let keep = even_cycle_vertices(&h);
    h.induced(&keep)
}

/// True iff `g - s` has no even cycle.
pub fn is_feasible_ect(g: &Graph, s: &NodeSet) -> bool {
    !has_even_cycle(&g.without(s))
}
