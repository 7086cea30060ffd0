//! Zero/pole orders of the differential each component inherits from a
//! twisted structure.
//!
//! Orders are the chart-independent shadow of the induced differentials:
//! changing the chart rescales the differential by a unit but never moves a
//! zero or pole, so `rescale_class` returns the identical assignment and only
//! records the unit label as provenance. Coefficient and residue data are
//! deliberately absent.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::twist::{degree_residual, TwistError, WeightedGraph};

/// A special point on a component: a marking or one branch of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointId {
    /// marking index (1-based)
    Marking(usize),
    /// flat half-edge id 2e + side
    Half(usize),
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointId::Marking(m) => write!(f, "m{m}"),
            PointId::Half(h) => write!(f, "h{h}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RescaleEvent {
    pub vertex: usize,
    pub unit: String,
}

/// Per-vertex map from special points to the order of the induced
/// differential there: m_i at markings, c-1 at outgoing branches, -1 at
/// unoriented branches, -(c+1) at incoming branches. Orders at a vertex sum
/// to 2g_v - 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderAssignment {
    orders: Vec<BTreeMap<PointId, i64>>,
    rescalings: Vec<RescaleEvent>,
}

impl OrderAssignment {
    pub fn at_vertex(&self, v: usize) -> &BTreeMap<PointId, i64> {
        &self.orders[v]
    }

    pub fn vertices(&self) -> usize {
        self.orders.len()
    }

    pub fn rescalings(&self) -> &[RescaleEvent] {
        &self.rescalings
    }

    pub fn vertex_total(&self, v: usize) -> i64 {
        self.orders[v].values().sum()
    }

    pub fn orders(&self) -> &[BTreeMap<PointId, i64>] {
        &self.orders
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiffError {
    #[error("vertex {vertex} has nonzero degree residual {residual}")]
    NonzeroResidual { vertex: usize, residual: i64 },
    #[error(transparent)]
    Shape(#[from] TwistError),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
}

/// The order assignment induced by an admissible structure. Rejects
/// structures with a nonzero residual, naming the offending vertex.
pub fn induced_orders(w: &WeightedGraph) -> Result<OrderAssignment, DiffError> {
    let res = degree_residual(&w.graph, &w.signature, &w.structure)?;
    if let Some((v, &r)) = res.iter().enumerate().find(|(_, &r)| r != 0) {
        return Err(DiffError::NonzeroResidual { vertex: v, residual: r });
    }
    let mut orders = vec![BTreeMap::new(); w.graph.num_vertices()];
    for leg in w.graph.legs() {
        orders[leg.vertex].insert(
            PointId::Marking(leg.marking),
            w.signature.at_marking(leg.marking),
        );
    }
    for h in 0..w.graph.num_half_edges() {
        let v = w.graph.half_edge_vertex(h);
        let c = w.structure.contact[h / 2];
        let ord = if w.structure.is_outgoing(h) {
            c - 1
        } else if w.structure.is_incoming(h) {
            -(c + 1)
        } else {
            -1
        };
        orders[v].insert(PointId::Half(h), ord);
    }
    Ok(OrderAssignment {
        orders,
        rescalings: Vec::new(),
    })
}

/// Chart change at one vertex: the induced orders are invariant, so this
/// returns the same assignment with the unit recorded as provenance.
pub fn rescale_class(w: &WeightedGraph, vertex: usize, unit: &str) -> Result<OrderAssignment, DiffError> {
    if vertex >= w.graph.num_vertices() {
        return Err(DiffError::VertexOutOfRange(vertex));
    }
    let mut a = induced_orders(w)?;
    a.rescalings.push(RescaleEvent {
        vertex,
        unit: unit.to_string(),
    });
    Ok(a)
}
