//! Tilings of a pocket by even cycles bounding one or two faces.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::embed::{Dart, FaceSet};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId, Parity};
use crate::matching::max_matching;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TileKind {
    SingleFace(usize),
    FacePair(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    pub kind: TileKind,
    /// The tile's cycle as a closed walk of darts.
    pub cycle: Vec<Dart>,
}

impl Tile {
    pub fn faces(&self) -> Vec<usize> {
        match self.kind {
            TileKind::SingleFace(f) => vec![f],
            TileKind::FacePair(f, g) => vec![f, g],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    pub tiles: Vec<Tile>,
    pub finite_faces: usize,
    pub even_faces: usize,
    pub odd_faces: usize,
    pub covered_odd: usize,
    /// Fraction of odd finite faces covered.
    pub beta: Rational,
    /// Fraction of finite faces that are even.
    pub psi: Rational,
}

impl Tiling {
    /// `beta (1 - psi) + 2 psi`, required to be at least 2/3.
    pub fn certificate(&self) -> Rational {
        certificate(&self.beta, &self.psi)
    }
}

pub fn certificate(beta: &Rational, psi: &Rational) -> Rational {
    beta * (Rational::one() - psi) + Rational::from_integer(2.into()) * psi
}

pub fn two_thirds() -> Rational {
    Rational::new(2.into(), 3.into())
}

fn ratio(a: usize, b: usize) -> Rational {
    if b == 0 {
        Rational::one()
    } else {
        Rational::new(a.into(), b.into())
    }
}

/// Edges traversed an odd number of times by a face walk.
fn face_edges(fs: &FaceSet, f: usize) -> BTreeSet<EdgeId> {
    let mut out = BTreeSet::new();
    for e in fs.faces[f].edges() {
        if !out.insert(e) {
            out.remove(&e);
        }
    }
    out
}

/// The edge set as a single simple closed walk, if it is one.
pub fn cycle_from_edges(g: &Graph, edges: &BTreeSet<EdgeId>) -> Option<Vec<Dart>> {
    let first = *edges.iter().next()?;
    let mut degree: BTreeMap<NodeId, usize> = BTreeMap::new();
    for &e in edges {
        let edge = g.edge(e);
        *degree.entry(edge.u).or_default() += 1;
        *degree.entry(edge.v).or_default() += 1;
    }
    if degree.values().any(|&d| d != 2) {
        return None;
    }
    let start = g.edge(first).u;
    let mut walk = vec![Dart::new(first, true)];
    let mut cur = g.edge(first).v;
    let mut prev = first;
    while cur != start {
        let e = *g.incident(cur).iter().find(|&&e| e != prev && edges.contains(&e))?;
        walk.push(Dart::new(e, g.edge(e).u == cur));
        cur = g.edge(e).other(cur);
        prev = e;
    }
    (walk.len() == edges.len()).then_some(walk)
}

fn single_face_cycle(g: &Graph, fs: &FaceSet, f: usize) -> Option<Vec<Dart>> {
    let edges = face_edges(fs, f);
    if edges.len() != fs.faces[f].len() {
        return None;
    }
    cycle_from_edges(g, &edges)?;
    Some(fs.faces[f].darts.clone())
}

fn pair_cycle(g: &Graph, fs: &FaceSet, f: usize, h: usize) -> Option<Vec<Dart>> {
    let a = face_edges(fs, f);
    let b = face_edges(fs, h);
    let diff: BTreeSet<EdgeId> = a.symmetric_difference(&b).copied().collect();
    cycle_from_edges(g, &diff)
}

fn cycle_parity(g: &Graph, cycle: &[Dart]) -> Parity {
    Parity::sum(cycle.iter().map(|d| g.edge(d.edge).parity))
}

/// Graph on the odd finite faces (node `i` is face `faces[i]`), with an edge
/// for every pair of faces sharing an edge; each such pair must bound a
/// single cycle.
pub fn odd_face_tile_graph(g: &Graph, fs: &FaceSet) -> Result<(Graph, Vec<usize>)> {
    let odd: Vec<usize> = (0..fs.len())
        .filter(|&f| !fs.faces[f].outer && !fs.parity(g, f).is_even())
        .collect();
    let mut index = vec![usize::MAX; fs.len()];
    for (i, &f) in odd.iter().enumerate() {
        index[f] = i;
    }
    let mut out = Graph::with_nodes(odd.len());
    let mut seen = BTreeSet::new();
    for e in g.edge_ids() {
        let a = fs.face_of(Dart::new(e, true));
        let b = fs.face_of(Dart::new(e, false));
        if a == b || index[a] == usize::MAX || index[b] == usize::MAX {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            continue;
        }
        if pair_cycle(g, fs, key.0, key.1).is_none() {
            return Err(Error::SharedBoundaryNotPath(key.0, key.1));
        }
        out.add_edge(index[key.0], index[key.1], Parity::Odd);
    }
    Ok((out, odd))
}

/// Tiles every even finite face on its own and pairs odd finite faces along
/// a maximum matching of the odd-face graph.
pub fn quasi_perfect_tiling(g: &Graph, fs: &FaceSet) -> Result<Tiling> {
    let mut tiles = Vec::new();
    let mut finite = 0;
    let mut even = 0;
    for (f, face) in fs.faces.iter().enumerate() {
        if face.outer {
            continue;
        }
        finite += 1;
        if fs.parity(g, f).is_even() {
            even += 1;
            let cycle = single_face_cycle(g, fs, f)
                .ok_or_else(|| Error::Assertion(format!("even face {f} is not bounded by a cycle")))?;
            tiles.push(Tile { kind: TileKind::SingleFace(f), cycle });
        }
    }
    let (odd_graph, odd) = odd_face_tile_graph(g, fs)?;
    let m = max_matching(&odd_graph);
    for &e in &m.edges {
        let edge = odd_graph.edge(e);
        let (a, b) = (odd[edge.u].min(odd[edge.v]), odd[edge.u].max(odd[edge.v]));
        let cycle = pair_cycle(g, fs, a, b).expect("checked while building the odd-face graph");
        tiles.push(Tile { kind: TileKind::FacePair(a, b), cycle });
    }
    let covered_odd = 2 * m.len();
    let tiling = Tiling {
        tiles,
        finite_faces: finite,
        even_faces: even,
        odd_faces: odd.len(),
        covered_odd,
        beta: ratio(covered_odd, odd.len()),
        psi: ratio(even, finite),
    };
    if tiling.certificate() < two_thirds() {
        return Err(Error::QuasiPerfectViolation(format!(
            "beta = {}, psi = {}, certificate = {}",
            tiling.beta,
            tiling.psi,
            tiling.certificate()
        )));
    }
    Ok(tiling)
}

/// Checks every tile and tiling invariant from scratch. Returns the list of
/// violations (empty when the tiling is valid).
pub fn verify_tiling(g: &Graph, fs: &FaceSet, t: &Tiling) -> Vec<String> {
    let mut problems = Vec::new();
    let mut covered = vec![0usize; fs.len()];
    for tile in &t.tiles {
        for f in tile.faces() {
            if f >= fs.len() {
                problems.push(format!("tile refers to unknown face {f}"));
                continue;
            }
            covered[f] += 1;
            if fs.faces[f].outer {
                problems.push(format!("tile covers the outer face {f}"));
            }
        }
        let expected = match tile.kind {
            TileKind::SingleFace(f) if f < fs.len() => {
                if !fs.parity(g, f).is_even() {
                    problems.push(format!("single-face tile on odd face {f}"));
                }
                single_face_cycle(g, fs, f)
            }
            TileKind::FacePair(f, h) if f < fs.len() && h < fs.len() => {
                if f == h {
                    problems.push(format!("face pair repeats face {f}"));
                }
                let shares = fs.faces[f].edges().any(|e| fs.faces[h].edges().any(|x| x == e));
                if !shares {
                    problems.push(format!("faces {f} and {h} share no edge"));
                }
                pair_cycle(g, fs, f, h)
            }
            _ => None,
        };
        let tile_edges: BTreeSet<EdgeId> = tile.cycle.iter().map(|d| d.edge).collect();
        match expected {
            Some(c) if c.iter().map(|d| d.edge).collect::<BTreeSet<_>>() == tile_edges => {}
            _ => problems.push(format!("tile {:?} does not bound its faces by a cycle", tile.kind)),
        }
        if !cycle_parity(g, &tile.cycle).is_even() {
            problems.push(format!("tile {:?} is an odd cycle", tile.kind));
        }
    }
    for (f, &c) in covered.iter().enumerate() {
        if c > 1 {
            problems.push(format!("face {f} covered {c} times"));
        }
    }
    let mut finite = 0;
    let mut even = 0;
    let mut odd = 0;
    let mut covered_odd = 0;
    for (f, face) in fs.faces.iter().enumerate() {
        if face.outer {
            continue;
        }
        finite += 1;
        if fs.parity(g, f).is_even() {
            even += 1;
            if covered[f] == 0 {
                problems.push(format!("even face {f} uncovered"));
            }
        } else {
            odd += 1;
            if covered[f] > 0 {
                covered_odd += 1;
            }
        }
    }
    let beta = ratio(covered_odd, odd);
    let psi = ratio(even, finite);
    if beta != t.beta || psi != t.psi {
        problems.push(format!("recorded beta/psi {}/{} differ from {beta}/{psi}", t.beta, t.psi));
    }
    if certificate(&beta, &psi) < two_thirds() {
        problems.push(format!("certificate {} below 2/3", certificate(&beta, &psi)));
    }
    problems
}

/// Pseudo-tiling statistics where the outer face may be covered: returns
/// (beta, psi) over all faces using a maximum matching of all odd faces.
pub fn pseudo_tiling_stats(g: &Graph, fs: &FaceSet) -> (Rational, Rational) {
    let odd: Vec<usize> = (0..fs.len()).filter(|&f| !fs.parity(g, f).is_even()).collect();
    let mut index = vec![usize::MAX; fs.len()];
    for (i, &f) in odd.iter().enumerate() {
        index[f] = i;
    }
    let mut dual = Graph::with_nodes(odd.len());
    let mut seen = BTreeSet::new();
    for e in g.edge_ids() {
        let a = fs.face_of(Dart::new(e, true));
        let b = fs.face_of(Dart::new(e, false));
        if a != b && index[a] != usize::MAX && index[b] != usize::MAX && seen.insert((a.min(b), a.max(b))) {
            dual.add_edge(index[a], index[b], Parity::Odd);
        }
    }
    let m = max_matching(&dual);
    let even = fs.len() - odd.len();
    (ratio(2 * m.len(), odd.len()), ratio(even, fs.len()))
}
