//! Seeded instance generators.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::Point;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet, Parity};
use crate::instance::Instance;
use crate::Rational;

/// Node costs of generated grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostProfile {
    Unit,
    /// Integers drawn uniformly from `lo..=hi`.
    Uniform(u32, u32),
}

impl CostProfile {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Rational {
        match *self {
            CostProfile::Unit => Rational::from_integer(1.into()),
            CostProfile::Uniform(lo, hi) => Rational::from_integer(rng.gen_range(lo..=hi).into()),
        }
    }
}

impl fmt::Display for CostProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostProfile::Unit => write!(f, "unit"),
            CostProfile::Uniform(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

impl std::str::FromStr for CostProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<CostProfile> {
        if s == "unit" {
            return Ok(CostProfile::Unit);
        }
        let bad = || Error::BadParameter(format!("cost profile `{s}`"));
        let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
        let lo: u32 = lo.parse().map_err(|_| bad())?;
        let hi: u32 = hi.parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok(CostProfile::Uniform(lo, hi))
    }
}

/// Role of a node in the handle-chain families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Infinite cost: branch nodes and the bottom path.
    Black,
    /// Alone on the short handle of a pentagon.
    Red,
    /// On the long handle of a pentagon.
    Blue,
    /// The distinguished green node on the long handle of the green pentagon.
    GreenV,
    /// Other green nodes.
    Green,
}

/// A generated instance with per-node roles (empty for grids).
#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: Instance,
    pub roles: Vec<Role>,
}

impl Generated {
    pub fn nodes_with(&self, role: Role) -> Vec<NodeId> {
        (0..self.roles.len()).filter(|&v| self.roles[v] == role).collect()
    }
}

/// A reproducible description of a generated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceSpec {
    Grid { width: usize, height: usize, costs: CostProfile, seed: u64 },
    /// Grid keeping each edge with probability `keep_percent / 100`.
    GridSubgraph { width: usize, height: usize, keep_percent: u32, costs: CostProfile, seed: u64 },
    PentagonRing { k: usize, epsilon: Rational },
    HandleChain { k: usize },
    Tessellation { reps: usize },
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance> {
        match self {
            InstanceSpec::Grid { width, height, costs, seed } => grid(*width, *height, *costs, *seed),
            InstanceSpec::GridSubgraph { width, height, keep_percent, costs, seed } => {
                grid_subgraph(*width, *height, *keep_percent, *costs, *seed)
            }
            InstanceSpec::PentagonRing { k, epsilon } => pentagon_ring(*k, epsilon).map(|g| g.instance),
            InstanceSpec::HandleChain { k } => handle_chain(*k).map(|g| g.instance),
            InstanceSpec::Tessellation { reps } => tessellation(*reps),
        }
    }
}

/// A deterministic mix of every family, cycling through small sizes. The
/// first `count` specs are returned.
pub fn mixed_corpus(count: usize) -> Vec<InstanceSpec> {
    let eps = [(1, 10), (1, 4), (1, 2)];
    let mut out = Vec::with_capacity(count);
    let mut round = 0u64;
    while out.len() < count {
        let r = round as usize;
        let (en, ed) = eps[r % 3];
        let batch = [
            InstanceSpec::Grid { width: 2 + r % 5, height: 2 + (r / 5) % 5, costs: CostProfile::Uniform(1, 9), seed: round },
            InstanceSpec::GridSubgraph {
                width: 3 + r % 4,
                height: 3 + (r / 4) % 4,
                keep_percent: 70 + (r % 4) as u32 * 10,
                costs: CostProfile::Uniform(1, 5),
                seed: round,
            },
            InstanceSpec::Grid { width: 3 + r % 3, height: 3, costs: CostProfile::Unit, seed: round },
            InstanceSpec::PentagonRing { k: 2 + 2 * (r % 3), epsilon: Rational::new(en.into(), ed.into()) },
            InstanceSpec::HandleChain { k: 1 + 2 * (r % 3) },
            InstanceSpec::Tessellation { reps: 1 + r % 4 },
        ];
        out.extend(batch.into_iter().take(count - out.len()));
        round += 1;
    }
    out
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceSpec::Grid { width, height, costs, seed } => write!(f, "grid {width}x{height} costs={costs} seed={seed}"),
            InstanceSpec::GridSubgraph { width, height, keep_percent, costs, seed } => {
                write!(f, "grid-subgraph {width}x{height} keep={keep_percent}% costs={costs} seed={seed}")
            }
            InstanceSpec::PentagonRing { k, epsilon } => write!(f, "pentagon-ring k={k} eps={epsilon}"),
            InstanceSpec::HandleChain { k } => write!(f, "handle-chain k={k}"),
            InstanceSpec::Tessellation { reps } => write!(f, "tessellation reps={reps}"),
        }
    }
}

fn pt(x: i64, y: i64) -> Option<Point> {
    Some(Point::from_ints(x, y))
}

fn grid_edges(width: usize, height: usize) -> Vec<(NodeId, NodeId)> {
    let id = |x: usize, y: usize| y * width + x;
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < height {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    edges
}

fn grid_instance(width: usize, height: usize, edges: &[(NodeId, NodeId)], costs: CostProfile, rng: &mut ChaCha8Rng) -> Instance {
    let mut g = Graph::from_edges(width * height, edges);
    for v in 0..width * height {
        g.set_cost(v, costs.draw(rng));
    }
    let coords = (0..width * height).map(|v| pt((v % width) as i64, (v / width) as i64)).collect();
    Instance::new(g, coords)
}

/// `width x height` grid with integer coordinates.
pub fn grid(width: usize, height: usize, costs: CostProfile, seed: u64) -> Result<Instance> {
    if width == 0 || height == 0 {
        return Err(Error::BadParameter("grid dimensions must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(grid_instance(width, height, &grid_edges(width, height), costs, &mut rng))
}

/// Grid with each edge kept independently with probability `keep_percent`%.
pub fn grid_subgraph(width: usize, height: usize, keep_percent: u32, costs: CostProfile, seed: u64) -> Result<Instance> {
    if width == 0 || height == 0 || keep_percent > 100 {
        return Err(Error::BadParameter("grid subgraph parameters out of range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(NodeId, NodeId)> =
        grid_edges(width, height).into_iter().filter(|_| rng.gen_range(0..100) < keep_percent).collect();
    Ok(grid_instance(width, height, &edges, costs, &mut rng))
}

/// Builder for chains of pentagons between black branch nodes closed by a
/// black bottom path.
struct Chain {
    g: Graph,
    coords: Vec<Option<Point>>,
    roles: Vec<Role>,
}

impl Chain {
    fn node(&mut self, cost: Rational, role: Role, x: i64, y: i64) -> NodeId {
        let v = self.g.add_node(cost);
        self.coords.push(pt(x, y));
        self.roles.push(role);
        v
    }

    fn path(&mut self, nodes: &[NodeId]) {
        for w in nodes.windows(2) {
            self.g.add_edge(w[0], w[1], Parity::Odd);
        }
    }

    /// Pentagons between branch nodes `(4i, 0)`; `shapes[i]` lists the
    /// interior of the upper and the lower handle as (cost, role) entries.
    /// A handle with one interior node has length 2, with two nodes length 3.
    fn build(shapes: &[[Vec<(Rational, Role)>; 2]], bottom_len: usize) -> Result<Generated> {
        if bottom_len < 3 || bottom_len.is_multiple_of(2) {
            return Err(Error::BadParameter(format!("bottom path length {bottom_len} must be odd and at least 3")));
        }
        let zero = Rational::from_integer(0.into());
        let mut c = Chain { g: Graph::new(), coords: Vec::new(), roles: Vec::new() };
        let m = shapes.len() as i64;
        let branch: Vec<NodeId> = (0..=m).map(|i| c.node(zero.clone(), Role::Black, 4 * i, 0)).collect();
        for (i, shape) in shapes.iter().enumerate() {
            let x = 4 * i as i64;
            for (side, handle) in shape.iter().enumerate() {
                let y = if side == 0 { 2 } else { -2 };
                let xs: &[i64] = match handle.len() {
                    1 => &[2],
                    2 => &[1, 3],
                    n => return Err(Error::BadParameter(format!("handle with {n} interior nodes"))),
                };
                let mut nodes = vec![branch[i]];
                for ((cost, role), dx) in handle.iter().zip(xs) {
                    nodes.push(c.node(cost.clone(), *role, x + dx, y));
                }
                nodes.push(branch[i + 1]);
                c.path(&nodes);
            }
        }
        let interior = bottom_len - 1;
        let mut bottom = vec![branch[0]];
        for j in 0..interior {
            let x = (4 * m * j as i64) / (interior as i64 - 1);
            bottom.push(c.node(zero.clone(), Role::Black, x, -6));
        }
        bottom.push(branch[m as usize]);
        c.path(&bottom);
        let mut instance = Instance::new(c.g, c.coords);
        instance.infinite = (0..c.roles.len()).filter(|&v| c.roles[v] == Role::Black).collect::<NodeSet>();
        Ok(Generated { instance, roles: c.roles })
    }
}

/// An even number `k` of pentagons in a chain closed by a bottom path of
/// odd length 3. Each pentagon has a red node (cost `1 + epsilon`) alone on
/// its upper handle and two blue nodes (cost 1) on its lower handle; branch
/// and bottom nodes have infinite cost.
pub fn pentagon_ring(k: usize, epsilon: &Rational) -> Result<Generated> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::OddK(k));
    }
    let one = Rational::from_integer(1.into());
    let red = &one + epsilon;
    let shape = [vec![(red, Role::Red)], vec![(one.clone(), Role::Blue), (one, Role::Blue)]];
    Chain::build(&vec![shape; k], 3)
}

/// The green pentagon followed by an odd number `k` of red/blue pentagons
/// (red and blue cost 1), closed by a bottom path of odd length 3. The green
/// pentagon (all green nodes cost 2) carries `v` and one green node on its
/// upper handle and one green node on its lower handle.
pub fn handle_chain(k: usize) -> Result<Generated> {
    if k == 0 || k.is_multiple_of(2) {
        return Err(Error::BadParameter(format!("handle chain needs an odd number of pentagons, got {k}")));
    }
    let one = Rational::from_integer(1.into());
    let two = Rational::from_integer(2.into());
    let mut shapes = vec![[vec![(two.clone(), Role::GreenV), (two.clone(), Role::Green)], vec![(two, Role::Green)]]];
    for _ in 0..k {
        shapes.push([vec![(one.clone(), Role::Red)], vec![(one.clone(), Role::Blue), (one.clone(), Role::Blue)]]);
    }
    Chain::build(&shapes, 3)
}

/// Scale of the integer coordinates of the tessellation.
const TESS_SCALE: f64 = 1000.0;

/// A row of `reps` hexagons of the honeycomb with every vertex truncated:
/// each hexagon becomes a dodecagon, each vertex shared by three hexagon
/// edges becomes a triangle, and each boundary vertex of degree 2 becomes an
/// edge. The `reps` dodecagons and `2 reps - 2` triangles are the inner
/// faces; no two triangles share an edge. Unit costs.
pub fn tessellation(reps: usize) -> Result<Instance> {
    if reps == 0 {
        return Err(Error::BadParameter("tessellation needs at least one hexagon".into()));
    }
    // pointy-top hexagons side by side; vertex j of hexagon i at angle 90 + 60 j
    let sq3 = 3f64.sqrt();
    let mut verts: Vec<(f64, f64)> = Vec::new();
    let mut hex_edges: Vec<(usize, usize)> = Vec::new();
    let find = |verts: &Vec<(f64, f64)>, p: (f64, f64)| {
        verts.iter().position(|q| (q.0 - p.0).abs() < 1e-9 && (q.1 - p.1).abs() < 1e-9)
    };
    for i in 0..reps {
        let cx = sq3 * i as f64;
        let ids: Vec<usize> = (0..6)
            .map(|j| {
                let a = std::f64::consts::PI / 180.0 * (90.0 + 60.0 * j as f64);
                let p = (cx + a.cos(), a.sin());
                find(&verts, p).unwrap_or_else(|| {
                    verts.push(p);
                    verts.len() - 1
                })
            })
            .collect();
        for j in 0..6 {
            let (a, b) = (ids[j], ids[(j + 1) % 6]);
            if !hex_edges.contains(&(a, b)) && !hex_edges.contains(&(b, a)) {
                hex_edges.push((a, b));
            }
        }
    }
    // one new node per (vertex, incident edge) at a third of the edge
    let mut g = Graph::new();
    let mut coords = Vec::new();
    let mut corner = std::collections::BTreeMap::new();
    let one = Rational::from_integer(1.into());
    for (e, &(a, b)) in hex_edges.iter().enumerate() {
        for (x, y) in [(a, b), (b, a)] {
            let p = verts[x];
            let q = verts[y];
            let np = (p.0 + (q.0 - p.0) / 3.0, p.1 + (q.1 - p.1) / 3.0);
            let v = g.add_node(one.clone());
            coords.push(pt((np.0 * TESS_SCALE).round() as i64, (np.1 * TESS_SCALE).round() as i64));
            corner.insert((x, e), v);
        }
        g.add_edge(corner[&(a, e)], corner[&(b, e)], Parity::Odd);
    }
    for x in 0..verts.len() {
        let around: Vec<NodeId> =
            (0..hex_edges.len()).filter_map(|e| corner.get(&(x, e)).copied()).collect();
        match around.len() {
            2 => {
                g.add_edge(around[0], around[1], Parity::Odd);
            }
            3 => {
                for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                    g.add_edge(around[i], around[j], Parity::Odd);
                }
            }
            n => return Err(Error::Assertion(format!("honeycomb vertex of degree {n}"))),
        }
    }
    Ok(Instance::new(g, coords))
}
