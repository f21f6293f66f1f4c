use num_traits::{One, Zero};

use crate::embed::{faces, Dart, Embedding, FaceSet, Point};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId, NodeSet};
use crate::Rational;

/// A node-weighted plane graph.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Instance {
    pub graph: Graph,
    pub coords: Vec<Option<Point>>,
    /// Explicit rotation (edge ids per node); overrides the coordinates.
    pub rotation: Option<Vec<Vec<EdgeId>>>,
    /// Nodes whose cost stands for infinity.
    pub infinite: NodeSet,
}

impl Instance {
    pub fn new(graph: Graph, coords: Vec<Option<Point>>) -> Instance {
        Instance { graph, coords, rotation: None, infinite: NodeSet::new() }
    }

    pub fn has_coordinates(&self) -> bool {
        self.graph.nodes().all(|v| self.coords.get(v).is_some_and(Option::is_some))
    }

    pub fn embedding(&self) -> Result<Embedding> {
        match &self.rotation {
            Some(lists) => {
                let emb = Embedding::from_edge_lists(&self.graph, lists)?;
                emb.check_euler(&self.graph)?;
                Ok(emb)
            }
            None => Embedding::from_coordinates(&self.graph, &self.coords),
        }
    }

    pub fn point(&self, v: NodeId) -> Option<&Point> {
        self.coords.get(v).and_then(Option::as_ref)
    }

    pub fn faces(&self) -> Result<FaceSet> {
        let emb = self.embedding()?;
        if self.geometry().is_some() {
            let trace = |d: Dart| vec![self.point(d.tail(&self.graph)).cloned().expect("coordinates")];
            Ok(faces(&self.graph, &emb, Some(&trace)))
        } else {
            Ok(faces(&self.graph, &emb, None))
        }
    }

    /// Cost standing in for infinity: `10^6` times the total finite cost
    /// (at least `10^6`).
    pub fn infinite_cost(&self) -> Rational {
        let finite: Rational = self
            .graph
            .nodes()
            .filter(|v| !self.infinite.contains(v))
            .map(|v| self.graph.cost(v).clone())
            .sum();
        let base = if finite.is_zero() { Rational::one() } else { finite };
        base * Rational::from_integer(1_000_000.into())
    }

    /// The graph with infinite costs replaced by [`Instance::infinite_cost`].
    pub fn effective_graph(&self) -> Graph {
        let mut g = self.graph.clone();
        if !self.infinite.is_empty() {
            let big = self.infinite_cost();
            for &v in &self.infinite {
                g.set_cost(v, big.clone());
            }
        }
        g
    }

    /// Coordinates when they determine the embedding.
    pub fn geometry(&self) -> Option<&[Option<Point>]> {
        (self.rotation.is_none() && self.has_coordinates()).then_some(self.coords.as_slice())
    }

    /// Validates graph structure and the embedding.
    pub fn validate(&self) -> Result<()> {
        self.graph.validate().map_err(Error::Assertion)?;
        self.embedding().map(|_| ())
    }
}
