//! Rotation systems, face walks and planar duals.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId, Parity};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Point {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Point {
        Point::new(Rational::from_integer(x.into()), Rational::from_integer(y.into()))
    }
}

/// One direction of an edge. A forward dart runs from `edge.u` to `edge.v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub edge: EdgeId,
    pub forward: bool,
}

impl Dart {
    pub fn new(edge: EdgeId, forward: bool) -> Dart {
        Dart { edge, forward }
    }

    pub fn rev(self) -> Dart {
        Dart { edge: self.edge, forward: !self.forward }
    }

    pub fn tail(self, g: &Graph) -> NodeId {
        let e = g.edge(self.edge);
        if self.forward {
            e.u
        } else {
            e.v
        }
    }

    pub fn head(self, g: &Graph) -> NodeId {
        self.rev().tail(g)
    }

    fn index(self) -> usize {
        2 * self.edge + usize::from(!self.forward)
    }
}

/// Rotation system: for every node, its outgoing darts in counterclockwise
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Embedding {
    rotation: Vec<Vec<Dart>>,
    position: Vec<Option<(NodeId, usize)>>,
}

impl Embedding {
    /// Builds an embedding from per-node cyclic dart orders.
    pub fn from_darts(g: &Graph, rotation: Vec<Vec<Dart>>) -> Result<Embedding> {
        let mut rotation = rotation;
        rotation.resize(g.node_bound(), Vec::new());
        let mut position = vec![None; 2 * g.edge_bound()];
        for (v, darts) in rotation.iter().enumerate() {
            if !g.has_node(v) && !darts.is_empty() {
                return Err(Error::InvalidRotation(format!("rotation given for missing node {v}")));
            }
            for (i, &d) in darts.iter().enumerate() {
                if !g.has_edge(d.edge) || d.tail(g) != v {
                    return Err(Error::InvalidRotation(format!(
                        "dart of edge {} does not leave node {v}",
                        d.edge
                    )));
                }
                if position[d.index()].replace((v, i)).is_some() {
                    return Err(Error::InvalidRotation(format!("edge {} listed twice", d.edge)));
                }
            }
        }
        for e in g.edge_ids() {
            if position[2 * e].is_none() || position[2 * e + 1].is_none() {
                return Err(Error::InvalidRotation(format!("edge {e} missing from rotation")));
            }
        }
        Ok(Embedding { rotation, position })
    }

    /// Builds an embedding from per-node cyclic edge-id lists. A loop is
    /// listed twice; its first occurrence is the forward dart.
    pub fn from_edge_lists(g: &Graph, lists: &[Vec<EdgeId>]) -> Result<Embedding> {
        let mut rotation = vec![Vec::new(); g.node_bound()];
        let mut loop_seen = vec![false; g.edge_bound()];
        for (v, list) in lists.iter().enumerate() {
            for &e in list {
                let edge = g
                    .try_edge(e)
                    .ok_or_else(|| Error::InvalidRotation(format!("unknown edge {e}")))?;
                let forward = if edge.is_loop() {
                    let first = !loop_seen[e];
                    loop_seen[e] = true;
                    first
                } else if edge.u == v {
                    true
                } else if edge.v == v {
                    false
                } else {
                    return Err(Error::InvalidRotation(format!("edge {e} not incident to {v}")));
                };
                rotation.get_mut(v).ok_or_else(|| Error::InvalidRotation(format!("unknown node {v}")))?.push(Dart::new(e, forward));
            }
        }
        Embedding::from_darts(g, rotation)
    }

    /// Straight-line embedding: darts around each node sorted by
    /// counterclockwise angle.
    pub fn from_coordinates(g: &Graph, coords: &[Option<Point>]) -> Result<Embedding> {
        let point = |v: NodeId| coords.get(v).and_then(Option::as_ref).ok_or(Error::MissingCoordinates(v));
        let mut rotation = vec![Vec::new(); g.node_bound()];
        for v in g.nodes() {
            let pv = point(v)?;
            let mut darts = Vec::new();
            for &e in g.incident(v) {
                let edge = g.edge(e);
                if edge.is_loop() {
                    return Err(Error::InvalidRotation(format!("loop {e} has no straight-line drawing")));
                }
                let pw = point(edge.other(v))?;
                let dir = (&pw.x - &pv.x, &pw.y - &pv.y);
                if dir.0.is_zero() && dir.1.is_zero() {
                    return Err(Error::InvalidRotation(format!("edge {e} has coincident endpoints")));
                }
                darts.push((dir, Dart::new(e, edge.u == v)));
            }
            darts.sort_by(|a, b| angle_cmp(&a.0, &b.0));
            for pair in darts.windows(2) {
                if angle_cmp(&pair[0].0, &pair[1].0) == Ordering::Equal {
                    return Err(Error::InvalidRotation(format!(
                        "edges {} and {} overlap at node {v}",
                        pair[0].1.edge, pair[1].1.edge
                    )));
                }
            }
            rotation[v] = darts.into_iter().map(|(_, d)| d).collect();
        }
        let emb = Embedding::from_darts(g, rotation)?;
        emb.check_euler(g)?;
        Ok(emb)
    }

    /// Outgoing darts of `v` in counterclockwise order.
    pub fn rotation(&self, v: NodeId) -> &[Dart] {
        self.rotation.get(v).map_or(&[], Vec::as_slice)
    }

    /// Node and index of `d` within its tail's rotation.
    pub fn position(&self, d: Dart) -> (NodeId, usize) {
        self.position[d.index()].expect("dart in embedding")
    }

    /// Counterclockwise successor of `d` around its tail.
    pub fn succ(&self, d: Dart) -> Dart {
        let (v, i) = self.position(d);
        let rot = &self.rotation[v];
        rot[(i + 1) % rot.len()]
    }

    /// Next dart along the face walk containing `d`.
    pub fn face_next(&self, d: Dart) -> Dart {
        self.succ(d.rev())
    }

    /// Restriction to a subgraph of the embedded graph (same ids).
    pub fn restrict(&self, sub: &Graph) -> Embedding {
        let mut rotation = vec![Vec::new(); sub.node_bound()];
        for v in sub.nodes() {
            rotation[v] = self.rotation(v).iter().copied().filter(|d| sub.has_edge(d.edge)).collect();
        }
        Embedding::from_darts(sub, rotation).expect("restriction of a valid rotation")
    }

    /// Checks `|V| - |E| + |F| = 2` in every connected component.
    pub fn check_euler(&self, g: &Graph) -> Result<()> {
        let walks = face_walks(g, self);
        let mut comp_of = vec![usize::MAX; g.node_bound()];
        let comps = g.components();
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut faces = vec![0i64; comps.len()];
        for w in &walks {
            faces[comp_of[w[0].tail(g)]] += 1;
        }
        for (i, c) in comps.iter().enumerate() {
            let edges = g.edges().filter(|(_, e)| comp_of[e.u] == i).count() as i64;
            let f = faces[i].max(1);
            let chi = c.len() as i64 - edges + f;
            if chi != 2 {
                return Err(Error::EulerCheckFailed(format!(
                    "component containing node {}: {} nodes, {edges} edges, {f} faces",
                    c[0],
                    c.len()
                )));
            }
        }
        Ok(())
    }
}

fn half(d: &(Rational, Rational)) -> u8 {
    if d.1.is_positive() || (d.1.is_zero() && d.0.is_positive()) {
        0
    } else {
        1
    }
}

/// Orders direction vectors by counterclockwise angle from the positive x axis.
fn angle_cmp(a: &(Rational, Rational), b: &(Rational, Rational)) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a.0 * &b.1 - &a.1 * &b.0;
        Rational::zero().cmp(&cross)
    })
}

fn face_walks(g: &Graph, emb: &Embedding) -> Vec<Vec<Dart>> {
    let mut seen = vec![false; 2 * g.edge_bound()];
    let mut out = Vec::new();
    for e in g.edge_ids() {
        for forward in [true, false] {
            let start = Dart::new(e, forward);
            if seen[start.index()] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            while !seen[d.index()] {
                seen[d.index()] = true;
                walk.push(d);
                d = emb.face_next(d);
            }
            out.push(walk);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<Dart>,
    pub outer: bool,
}

impl Face {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.darts.iter().map(|d| d.edge)
    }

    pub fn parity(&self, g: &Graph) -> Parity {
        Parity::sum(self.darts.iter().map(|d| g.edge(d.edge).parity))
    }

    pub fn nodes(&self, g: &Graph) -> Vec<NodeId> {
        self.darts.iter().map(|d| d.tail(g)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    pub faces: Vec<Face>,
    face_of: Vec<usize>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Face to the left of dart `d` (the walk containing it).
    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d.index()]
    }

    pub fn outer_faces(&self) -> impl Iterator<Item = usize> + '_ {
        self.faces.iter().enumerate().filter(|(_, f)| f.outer).map(|(i, _)| i)
    }

    pub fn parity(&self, g: &Graph, f: usize) -> Parity {
        self.faces[f].parity(g)
    }
}

/// Twice the signed area enclosed by a closed polyline.
pub fn doubled_area(points: &[Point]) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..points.len() {
        let p = &points[i];
        let q = &points[(i + 1) % points.len()];
        acc += &p.x * &q.y - &q.x * &p.y;
    }
    acc
}

/// Computes the faces of an embedded graph. Face ids follow discovery order
/// over darts sorted by (edge id, forward first).
///
/// `trace` maps each dart to the points it passes through, from its tail up
/// to but excluding its head. When given, the outer face of each component is
/// the one with the largest signed area: walks keep their face on the right,
/// so bounded faces run clockwise and only the outer walk is counterclockwise.
/// Without a trace the outer face is
/// the longest face, ties broken by the smaller id.
pub fn faces(g: &Graph, emb: &Embedding, trace: Option<&dyn Fn(Dart) -> Vec<Point>>) -> FaceSet {
    let walks = face_walks(g, emb);
    let mut face_of = vec![usize::MAX; 2 * g.edge_bound()];
    for (i, w) in walks.iter().enumerate() {
        for d in w {
            face_of[d.index()] = i;
        }
    }
    let mut comp_of = vec![usize::MAX; g.node_bound()];
    let comps = g.components();
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let keys: Vec<(Rational, usize)> = walks
        .iter()
        .map(|w| match trace {
            Some(tr) => {
                let pts: Vec<Point> = w.iter().flat_map(|&d| tr(d)).collect();
                (-doubled_area(&pts), 0)
            }
            None => (Rational::zero(), usize::MAX - w.len()),
        })
        .collect();
    let mut best: Vec<Option<usize>> = vec![None; comps.len()];
    for (i, w) in walks.iter().enumerate() {
        let c = comp_of[w[0].tail(g)];
        match best[c] {
            Some(j) if keys[j] <= keys[i] => {}
            _ => best[c] = Some(i),
        }
    }
    let faces = walks
        .into_iter()
        .enumerate()
        .map(|(i, darts)| {
            let c = comp_of[darts[0].tail(g)];
            Face { darts, outer: best[c] == Some(i) }
        })
        .collect();
    FaceSet { faces, face_of }
}

/// Faces of a straight-line drawing.
pub fn faces_from_coordinates(g: &Graph, emb: &Embedding, coords: &[Option<Point>]) -> FaceSet {
    let trace = |d: Dart| vec![coords[d.tail(g)].clone().expect("coordinates")];
    faces(g, emb, Some(&trace))
}

/// Planar dual: one node per face, one edge per primal edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub graph: Graph,
    /// Primal edge behind each dual edge id.
    pub primal: Vec<EdgeId>,
}

pub fn dual_graph(g: &Graph, fs: &FaceSet) -> DualGraph {
    let mut graph = Graph::with_nodes(fs.len());
    let mut primal = Vec::new();
    for e in g.edge_ids() {
        let a = fs.face_of(Dart::new(e, true));
        let b = fs.face_of(Dart::new(e, false));
        graph.add_edge(a, b, g.edge(e).parity);
        primal.push(e);
    }
    DualGraph { graph, primal }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(list: &[(i64, i64)]) -> Vec<Option<Point>> {
        list.iter().map(|&(x, y)| Some(Point::from_ints(x, y))).collect()
    }

    fn grid(w: usize, h: usize) -> (Graph, Vec<Option<Point>>) {
        let id = |x: usize, y: usize| y * w + x;
        let mut edges = Vec::new();
        let mut coords = Vec::new();
        for y in 0..h {
            for x in 0..w {
                coords.push(Some(Point::from_ints(x as i64, y as i64)));
                if x + 1 < w {
                    edges.push((id(x, y), id(x + 1, y)));
                }
                if y + 1 < h {
                    edges.push((id(x, y), id(x, y + 1)));
                }
            }
        }
        (Graph::from_edges(w * h, &edges), coords)
    }

    fn lengths(fs: &FaceSet) -> Vec<usize> {
        let mut l: Vec<usize> = fs.faces.iter().map(Face::len).collect();
        l.sort_unstable();
        l
    }

    #[test]
    fn square() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let coords = pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let emb = Embedding::from_coordinates(&g, &coords).unwrap();
        let fs = faces_from_coordinates(&g, &emb, &coords);
        assert_eq!(lengths(&fs), vec![4, 4]);
        assert_eq!(fs.outer_faces().count(), 1);
        let inner = fs.faces.iter().find(|f| !f.outer).unwrap();
        assert_eq!(inner.darts[0], Dart::new(0, false));
        let dual = dual_graph(&g, &fs);
        assert_eq!(dual.graph.node_count(), 2);
        assert_eq!(dual.graph.edges_between(0, 1).len(), 4);
    }

    #[test]
    fn square_with_chord() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let coords = pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let emb = Embedding::from_coordinates(&g, &coords).unwrap();
        let fs = faces_from_coordinates(&g, &emb, &coords);
        assert_eq!(lengths(&fs), vec![3, 3, 4]);
        let outer: Vec<usize> = fs.outer_faces().collect();
        assert_eq!(fs.faces[outer[0]].len(), 4);
    }

    #[test]
    fn grid_faces_and_dual() {
        let (g, coords) = grid(3, 3);
        let emb = Embedding::from_coordinates(&g, &coords).unwrap();
        let fs = faces_from_coordinates(&g, &emb, &coords);
        assert_eq!(lengths(&fs), vec![4, 4, 4, 4, 8]);
        let dual = dual_graph(&g, &fs);
        assert_eq!(dual.graph.edge_count(), 12);
        let outer = fs.outer_faces().next().unwrap();
        assert_eq!(fs.faces[outer].len(), 8);
        for f in 0..fs.len() {
            let mut nbrs: Vec<usize> = dual.graph.neighbors(f).map(|(_, x)| x).collect();
            nbrs.sort_unstable();
            nbrs.dedup();
            // each inner square touches two squares and the outer face
            let expected = if f == outer { 4 } else { 3 };
            assert_eq!(nbrs.len(), expected);
        }
    }

    #[test]
    fn single_edge_has_one_face_and_dual_loop() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let coords = pts(&[(0, 0), (1, 0)]);
        let emb = Embedding::from_coordinates(&g, &coords).unwrap();
        let fs = faces_from_coordinates(&g, &emb, &coords);
        assert_eq!(fs.len(), 1);
        assert!(fs.faces[0].outer);
        let dual = dual_graph(&g, &fs);
        assert!(dual.graph.edge(0).is_loop());
    }

    #[test]
    fn face_parity_with_tags() {
        let mut g = Graph::with_nodes(5);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5, Parity::Odd);
        }
        let coords = pts(&[(0, 0), (2, 0), (3, 2), (1, 3), (-1, 2)]);
        let emb = Embedding::from_coordinates(&g, &coords).unwrap();
        let fs = faces_from_coordinates(&g, &emb, &coords);
        assert_eq!(fs.parity(&g, 0), Parity::Odd);
        g.set_parity(2, Parity::Twin);
        assert!(fs.parity(&g, 0).is_even());
    }

    #[test]
    fn missing_coordinates_and_crossing_drawings() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        assert_eq!(
            Embedding::from_coordinates(&g, &[Some(Point::from_ints(0, 0)), None]),
            Err(Error::MissingCoordinates(1))
        );
        // K4 drawn with crossing diagonals of a square is rejected.
        let k4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]);
        let coords = pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert!(matches!(Embedding::from_coordinates(&k4, &coords), Err(Error::EulerCheckFailed(_))));
    }

    #[test]
    fn explicit_rotation_matches_coordinates() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let coords = pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let from_coords = Embedding::from_coordinates(&g, &coords).unwrap();
        let lists: Vec<Vec<EdgeId>> =
            g.nodes().map(|v| from_coords.rotation(v).iter().map(|d| d.edge).collect()).collect();
        let explicit = Embedding::from_edge_lists(&g, &lists).unwrap();
        assert_eq!(explicit, from_coords);
        let fs = faces(&g, &explicit, None);
        assert_eq!(fs.faces[fs.outer_faces().next().unwrap()].len(), 4);
    }
}
