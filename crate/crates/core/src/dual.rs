//! Dual variables: plain cycle inequalities, blended inequalities over
//! compressed cycles, and uniform dual increments with exact residuals.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::compress::{HandlePairKey, Piece, Segment};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId, Parity};
use crate::Rational;

/// Nonzero coefficients of an inequality `sum a_v x_v >= 1`.
pub type Coefficients = BTreeMap<NodeId, Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum InequalityKind {
    /// `x(C) >= 1` for an even cycle `C` of the residual graph.
    Cycle,
    /// Blended inequality of a compressed even cycle.
    Blended,
}

/// A raised dual variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub kind: InequalityKind,
    pub iteration: usize,
    pub coefficients: Coefficients,
    pub y: Rational,
}

/// The two handles of an elementary cycle, keyed independently of
/// orientation. `interiors[i]` belongs to the handle with edge set `key.i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandlePair {
    pub key: HandlePairKey,
    pub interiors: [Vec<NodeId>; 2],
}

/// Which handle of each elementary cycle is dominant. Entries are written
/// once; index `i` refers to `key.i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Designations {
    pub dominant: BTreeMap<HandlePairKey, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlendedInequality {
    pub coefficients: Coefficients,
    pub handle_pairs: Vec<HandlePair>,
    /// Elementary cycle given coefficient 1 on both handles.
    pub special: Option<HandlePairKey>,
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// Minimum residual over `nodes`; `None` stands for infinity.
pub fn handle_residual(nodes: &[NodeId], residual: &[Rational]) -> Option<Rational> {
    nodes.iter().map(|&v| residual[v].clone()).min()
}

/// Handle pairs of a piece in segment order, each with the handle index of
/// `handles[0]` within the key.
fn pairs_of(piece: &Piece) -> Vec<(HandlePair, usize)> {
    piece
        .elementary_cycles()
        .map(|c| {
            let key = c.key();
            let mut first: Vec<EdgeId> = c.handles[0].edges.clone();
            first.sort_unstable();
            let swap = first != key.0;
            let a = c.handles[0].interior().to_vec();
            let b = c.handles[1].interior().to_vec();
            let interiors = if swap { [b, a] } else { [a, b] };
            (HandlePair { key, interiors }, usize::from(swap))
        })
        .collect()
}

/// Coefficients of the blended inequality for the compressed cycle whose
/// pieces (oriented along the cycle) are `pieces`.
///
/// Piece ends, path nodes and branch nodes get 1. In each elementary cycle
/// the handle with the strictly larger residual gets 1 and the other 0;
/// equal residuals give 1/2 to both. When every cycle is strict and the
/// dominant handles close an odd cycle, the cycle with the smallest key gets
/// 1 on both handles.
pub fn blended_coefficients(
    source: &Graph,
    pieces: &[Piece],
    residual: &[Rational],
    designations: &mut Designations,
) -> Result<BlendedInequality> {
    let mut coefficients = Coefficients::new();
    let mut handle_pairs = Vec::new();
    let mut all_strict = true;
    let mut parity = Parity::Even;
    for piece in pieces {
        let pairs = pairs_of(piece);
        let mut choice = Vec::new();
        for s in &piece.segments {
            match s {
                Segment::Path(p) => {
                    for &v in &p.nodes {
                        coefficients.insert(v, Rational::one());
                    }
                }
                Segment::Cycle(c) => {
                    coefficients.insert(c.branch.0, Rational::one());
                    coefficients.insert(c.branch.1, Rational::one());
                }
            }
        }
        coefficients.insert(piece.ends.0, Rational::one());
        coefficients.insert(piece.ends.1, Rational::one());
        for (pair, first_index) in pairs {
            let r = [handle_residual(&pair.interiors[0], residual), handle_residual(&pair.interiors[1], residual)];
            // `None` (no interior nodes) is infinite
            let larger = match (&r[0], &r[1]) {
                (None, None) => None,
                (None, Some(_)) => Some(0),
                (Some(_), None) => Some(1),
                (Some(a), Some(b)) if a > b => Some(0),
                (Some(a), Some(b)) if a < b => Some(1),
                _ => None,
            };
            match larger {
                Some(d) => {
                    match designations.dominant.get(&pair.key) {
                        Some(&old) if old != d => {
                            return Err(Error::DesignationFlip(format!("{:?}", pair.key)));
                        }
                        Some(_) => {}
                        None => {
                            designations.dominant.insert(pair.key.clone(), d);
                        }
                    }
                    for &v in &pair.interiors[d] {
                        coefficients.insert(v, Rational::one());
                    }
                    choice.push(if d == first_index { 0 } else { 1 });
                }
                None => {
                    all_strict = false;
                    for v in pair.interiors.iter().flatten() {
                        coefficients.insert(*v, half());
                    }
                    choice.push(0);
                }
            }
            handle_pairs.push(pair);
        }
        let path = piece.path_with(|i| choice[i]);
        parity = parity.concat(path.parity(source));
    }
    let mut special = None;
    if all_strict && !handle_pairs.is_empty() && !parity.is_even() {
        let pair = handle_pairs.iter().min_by(|a, b| a.key.cmp(&b.key)).expect("nonempty");
        for v in pair.interiors.iter().flatten() {
            coefficients.insert(*v, Rational::one());
        }
        special = Some(pair.key.clone());
    }
    coefficients.retain(|_, a| !a.is_zero());
    Ok(BlendedInequality { coefficients, handle_pairs, special })
}

/// Outcome of one uniform increase of the active dual variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub epsilon: Rational,
    /// Nodes with positive rate whose residual reached zero.
    pub tight: Vec<NodeId>,
    /// Handle pairs whose residuals became equal.
    pub equalized: Vec<HandlePairKey>,
}

/// Residual costs and raised inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualState {
    pub residual: Vec<Rational>,
    pub inequalities: Vec<Inequality>,
    pub designations: Designations,
}

impl DualState {
    pub fn new(g: &Graph) -> DualState {
        let residual = (0..g.node_bound())
            .map(|v| if g.has_node(v) { g.cost(v).clone() } else { Rational::zero() })
            .collect();
        DualState { residual, inequalities: Vec::new(), designations: Designations::default() }
    }

    /// Registers an inequality with `y = 0` and returns its index.
    pub fn add(&mut self, kind: InequalityKind, iteration: usize, coefficients: Coefficients) -> usize {
        self.inequalities.push(Inequality { kind, iteration, coefficients, y: Rational::zero() });
        self.inequalities.len() - 1
    }

    pub fn dual_objective(&self) -> Rational {
        self.inequalities.iter().map(|i| i.y.clone()).sum()
    }

    fn rates(&self, active: &[usize]) -> BTreeMap<NodeId, Rational> {
        let mut rate: BTreeMap<NodeId, Rational> = BTreeMap::new();
        for &i in active {
            for (&v, a) in &self.inequalities[i].coefficients {
                *rate.entry(v).or_insert_with(Rational::zero) += a;
            }
        }
        rate
    }

    /// Raises every active inequality by the largest `epsilon` that keeps all
    /// residuals nonnegative and stops at the first time two unequal handle
    /// residuals meet.
    pub fn increment_step(&mut self, active: &[usize], pairs: &[HandlePair]) -> Result<StepOutcome> {
        let rate = self.rates(active);
        let eps_tight = rate
            .iter()
            .filter(|(_, r)| r.is_positive())
            .map(|(&v, r)| &self.residual[v] / r)
            .min()
            .ok_or(Error::ZeroRateDeadlock)?;
        let zero = Rational::zero();
        let rate_of = |v: NodeId| rate.get(&v).unwrap_or(&zero).clone();
        let mut epsilon = eps_tight;
        let unequal: Vec<&HandlePair> = pairs
            .iter()
            .filter(|p| {
                let a = handle_residual(&p.interiors[0], &self.residual);
                let b = handle_residual(&p.interiors[1], &self.residual);
                a.is_some() && b.is_some() && a != b
            })
            .collect();
        for p in &unequal {
            if let Some(t) = first_meeting(p, &self.residual, &rate_of, &epsilon) {
                if t < epsilon {
                    epsilon = t;
                }
            }
        }
        for &i in active {
            self.inequalities[i].y += &epsilon;
        }
        let mut tight = Vec::new();
        for (&v, r) in &rate {
            if r.is_positive() {
                self.residual[v] -= r * &epsilon;
                debug_assert!(!self.residual[v].is_negative());
                if self.residual[v].is_zero() {
                    tight.push(v);
                }
            }
        }
        let equalized = unequal
            .iter()
            .filter(|p| {
                handle_residual(&p.interiors[0], &self.residual) == handle_residual(&p.interiors[1], &self.residual)
            })
            .map(|p| p.key.clone())
            .collect();
        Ok(StepOutcome { epsilon, tight, equalized })
    }
}

/// First time `t` in `(0, limit]` at which the two handle minima of
/// `r_v - rate_v * t` coincide. Candidates are the pairwise crossing times of
/// the nodes' linear trajectories.
fn first_meeting(
    pair: &HandlePair,
    residual: &[Rational],
    rate_of: &dyn Fn(NodeId) -> Rational,
    limit: &Rational,
) -> Option<Rational> {
    let nodes: Vec<NodeId> = pair.interiors.iter().flatten().copied().collect();
    let lines: Vec<(Rational, Rational)> = nodes.iter().map(|&v| (residual[v].clone(), rate_of(v))).collect();
    let mut times = BTreeSet::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (r1, s1) = &lines[i];
            let (r2, s2) = &lines[j];
            if s1 != s2 {
                let t = (r1 - r2) / (s1 - s2);
                if t > Rational::zero() && &t <= limit {
                    times.insert(t);
                }
            }
        }
    }
    let at = |t: &Rational, h: &[NodeId]| h.iter().map(|&v| &residual[v] - rate_of(v) * t).min();
    times.into_iter().find(|t| at(t, &pair.interiors[0]) == at(t, &pair.interiors[1]))
}
