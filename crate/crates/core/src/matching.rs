//! Maximum-cardinality matching in general graphs (Edmonds' blossom
//! algorithm) with exhaustive reference implementations.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId, NodeSet};

/// Size guard for the exhaustive matchers.
pub const BRUTE_FORCE_NODE_LIMIT: usize = 14;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub edges: BTreeSet<EdgeId>,
    pub covered: NodeSet,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether this is a matching of `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut seen = NodeSet::new();
        for &e in &self.edges {
            let Some(edge) = g.try_edge(e) else { return false };
            if edge.is_loop() || !seen.insert(edge.u) || !seen.insert(edge.v) {
                return false;
            }
        }
        seen == self.covered
    }

    fn from_edges(g: &Graph, edges: impl IntoIterator<Item = EdgeId>) -> Matching {
        let mut m = Matching::default();
        for e in edges {
            let edge = g.edge(e);
            m.edges.insert(e);
            m.covered.insert(edge.u);
            m.covered.insert(edge.v);
        }
        m
    }
}

/// Dense adjacency (lowest edge id per neighbour, loops dropped).
struct Dense {
    ids: Vec<NodeId>,
    adj: Vec<Vec<(usize, EdgeId)>>,
}

impl Dense {
    fn new(g: &Graph) -> Dense {
        let ids: Vec<NodeId> = g.nodes().collect();
        let mut index = vec![usize::MAX; g.node_bound()];
        for (i, &v) in ids.iter().enumerate() {
            index[v] = i;
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for (e, edge) in g.edges() {
            if edge.is_loop() {
                continue;
            }
            let (a, b) = (index[edge.u], index[edge.v]);
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup_by_key(|x| x.0);
        }
        Dense { ids, adj }
    }
}

/// Maximum-cardinality matching. Deterministic: exposed nodes are grown in
/// ascending order and neighbours scanned by ascending id.
pub fn max_matching(g: &Graph) -> Matching {
    let d = Dense::new(g);
    let n = d.ids.len();
    let mut mate = vec![usize::MAX; n];
    let mut mate_edge = vec![usize::MAX; n];
    for root in 0..n {
        if mate[root] == usize::MAX {
            if let Some(path) = augmenting_path(&d, &mate, root) {
                for pair in path.chunks(2) {
                    let (a, b) = (pair[0], pair[1]);
                    let e = d.adj[a].iter().find(|x| x.0 == b).expect("edge").1;
                    mate[a] = b;
                    mate[b] = a;
                    mate_edge[a] = e;
                    mate_edge[b] = e;
                }
            }
        }
    }
    let edges: Vec<EdgeId> = (0..n).filter(|&v| mate[v] != usize::MAX && v < mate[v]).map(|v| mate_edge[v]).collect();
    Matching::from_edges(g, edges)
}

/// Searches an augmenting path from the exposed node `root`. Returns its
/// nodes in order, so that consecutive pairs (0,1), (2,3), ... become matched.
fn augmenting_path(d: &Dense, mate: &[usize], root: usize) -> Option<Vec<usize>> {
    let n = d.ids.len();
    const NONE: usize = usize::MAX;
    let mut parent = vec![NONE; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    let mut queue = VecDeque::new();
    used[root] = true;
    queue.push_back(root);

    let lca = |base: &[usize], parent: &[usize], mut a: usize, mut b: usize| -> usize {
        let mut seen = vec![false; n];
        loop {
            a = base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = parent[mate[a]];
        }
        loop {
            b = base[b];
            if seen[b] {
                return b;
            }
            b = parent[mate[b]];
        }
    };

    while let Some(v) = queue.pop_front() {
        for &(to, _) in &d.adj[v] {
            if base[v] == base[to] || mate[v] == to {
                continue;
            }
            if to == root || (mate[to] != NONE && parent[mate[to]] != NONE) {
                // odd cycle: contract the blossom
                let cur = lca(&base, &parent, v, to);
                let mut blossom = vec![false; n];
                mark_path(&base, &mut parent, mate, &mut blossom, v, cur, to);
                mark_path(&base, &mut parent, mate, &mut blossom, to, cur, v);
                for i in 0..n {
                    if blossom[base[i]] {
                        base[i] = cur;
                        if !used[i] {
                            used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to] == NONE {
                parent[to] = v;
                if mate[to] == NONE {
                    let mut path = Vec::new();
                    let mut x = to;
                    while x != NONE {
                        let px = parent[x];
                        path.push(x);
                        path.push(px);
                        x = if mate[px] == NONE { NONE } else { mate[px] };
                    }
                    return Some(path);
                }
                used[mate[to]] = true;
                queue.push_back(mate[to]);
            }
        }
    }
    None
}

fn mark_path(
    base: &[usize],
    parent: &mut [usize],
    mate: &[usize],
    blossom: &mut [bool],
    mut v: usize,
    b: usize,
    mut child: usize,
) {
    while base[v] != b {
        blossom[base[v]] = true;
        blossom[base[mate[v]]] = true;
        parent[v] = child;
        child = mate[v];
        v = parent[mate[v]];
    }
}

/// Maximum matching by exhaustive search with a cardinality bound.
pub fn brute_force_matching(g: &Graph) -> Result<Matching> {
    let d = Dense::new(g);
    let n = d.ids.len();
    if n > BRUTE_FORCE_NODE_LIMIT {
        return Err(Error::TooLarge { size: n, limit: BRUTE_FORCE_NODE_LIMIT });
    }
    let mut best: Vec<EdgeId> = Vec::new();
    let mut cur = Vec::new();
    let mut taken = vec![false; n];
    search(&d, 0, &mut taken, &mut cur, &mut best);
    Ok(Matching::from_edges(g, best))
}

fn search(d: &Dense, from: usize, taken: &mut [bool], cur: &mut Vec<EdgeId>, best: &mut Vec<EdgeId>) {
    let n = taken.len();
    let free = taken.iter().filter(|t| !**t).count();
    if cur.len() + free / 2 <= best.len() {
        return;
    }
    let Some(v) = (from..n).find(|&v| !taken[v]) else {
        *best = cur.clone();
        return;
    };
    taken[v] = true;
    for &(w, e) in &d.adj[v] {
        if !taken[w] {
            taken[w] = true;
            cur.push(e);
            search(d, v + 1, taken, cur, best);
            cur.pop();
            taken[w] = false;
        }
    }
    // leave v exposed
    search(d, v + 1, taken, cur, best);
    taken[v] = false;
    if cur.len() > best.len() {
        *best = cur.clone();
    }
}

/// Set `X` maximising `oc(g - X) - |X|` by exhaustive search, with that
/// maximum. By the Tutte–Berge formula the maximum equals the number of nodes
/// left exposed by a maximum matching.
pub fn tutte_deficiency_witness(g: &Graph) -> Result<(NodeSet, usize)> {
    let ids: Vec<NodeId> = g.nodes().collect();
    let n = ids.len();
    if n > BRUTE_FORCE_NODE_LIMIT {
        return Err(Error::TooLarge { size: n, limit: BRUTE_FORCE_NODE_LIMIT });
    }
    let mut best = (NodeSet::new(), 0usize);
    let mut first = true;
    for mask in 0u32..(1 << n) {
        let x: NodeSet = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
        let odd = g.without(&x).components().iter().filter(|c| c.len() % 2 == 1).count();
        if odd < x.len() {
            continue;
        }
        let def = odd - x.len();
        if first || def > best.1 {
            best = (x, def);
            first = false;
        }
    }
    Ok(best)
}
