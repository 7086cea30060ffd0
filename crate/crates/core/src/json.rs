//! Wire format shared by the command-line front end and external tooling.
//!
//! Graphs are `{vertices: [{genus}], edges: [[v, v]], legs: [{marking,
//! vertex}]}` where each edge lists the attachment vertices of its two
//! half-edges (so `2e + side` is the flat half-edge id). Structures are
//! parallel arrays keyed by edge index. Every integer travels as a plain
//! JSON number; magnitudes are checked against 2^53 on both ingest and
//! egress so any consumer can parse the files without big-integer support.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffdata::OrderAssignment;
use crate::minmonoid::MinimalMonoid;
use crate::stablegraph::{Edge, GraphError, Leg, StableGraph, Vertex};
use crate::twist::TwistedStructure;
use crate::Signature;

/// Integers on the wire must satisfy |n| <= 2^53.
pub const MAX_MAGNITUDE: i64 = 1 << 53;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JsonError {
    #[error("{field}: integer {value} exceeds the 53-bit wire bound")]
    OutOfRange { field: &'static str, value: String },
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
}

fn check_i64(field: &'static str, value: i64) -> Result<i64, JsonError> {
    if value.abs() > MAX_MAGNITUDE {
        return Err(JsonError::OutOfRange {
            field,
            value: value.to_string(),
        });
    }
    Ok(value)
}

fn bigint_to_wire(field: &'static str, value: &BigInt) -> Result<i64, JsonError> {
    value
        .to_i64()
        .and_then(|v| if v.abs() > MAX_MAGNITUDE { None } else { Some(v) })
        .ok_or_else(|| JsonError::OutOfRange {
            field,
            value: value.to_string(),
        })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexJson {
    pub genus: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LegJson {
    pub marking: usize,
    pub vertex: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub legs: Vec<LegJson>,
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<StableGraph, JsonError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                check_i64("vertices.genus", v.genus)?;
                Ok(Vertex { genus: v.genus })
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        let legs = self
            .legs
            .iter()
            .map(|l| Leg {
                marking: l.marking,
                vertex: l.vertex,
            })
            .collect();
        let edges = self.edges.iter().map(|&halves| Edge { halves }).collect();
        Ok(StableGraph::new(vertices, legs, edges)?)
    }

    pub fn from_graph(g: &StableGraph) -> Self {
        GraphJson {
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexJson { genus: v.genus })
                .collect(),
            edges: g.edges().iter().map(|e| e.halves).collect(),
            legs: g
                .legs()
                .iter()
                .map(|l| LegJson {
                    marking: l.marking,
                    vertex: l.vertex,
                })
                .collect(),
        }
    }
}

/// Top-level input document: a graph, a signature, and optionally a twisted
/// structure on the graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InputJson {
    pub graph: GraphJson,
    pub signature: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<TwistedStructure>,
}

impl InputJson {
    pub fn parse_parts(
        &self,
    ) -> Result<(StableGraph, Signature, Option<TwistedStructure>), JsonError> {
        let graph = self.graph.to_graph()?;
        for &m in &self.signature {
            check_i64("signature", m)?;
        }
        if let Some(t) = &self.structure {
            for &c in &t.contact {
                check_i64("structure.contact", c)?;
            }
        }
        Ok((graph, Signature(self.signature.clone()), self.structure.clone()))
    }
}

/// Serialized monoid: ambient rank, Hilbert basis rows, and the
/// symbol-to-vector map with keys "v<i>" and "e<i>".
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonoidJson {
    pub ambient_rank: usize,
    pub hilbert_basis: Vec<Vec<i64>>,
    pub images: BTreeMap<String, Vec<i64>>,
}

pub fn monoid_to_json(m: &MinimalMonoid) -> Result<MonoidJson, JsonError> {
    let hilbert_basis = m
        .monoid
        .hilbert_basis()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| bigint_to_wire("hilbert_basis", x))
                .collect()
        })
        .collect::<Result<Vec<Vec<i64>>, JsonError>>()?;
    let mut images = BTreeMap::new();
    for (s, v) in &m.images {
        let vec = v
            .iter()
            .map(|x| bigint_to_wire("images", x))
            .collect::<Result<Vec<i64>, JsonError>>()?;
        images.insert(s.to_string(), vec);
    }
    Ok(MonoidJson {
        ambient_rank: m.ambient_rank(),
        hilbert_basis,
        images,
    })
}

/// Orders as a vertex-indexed list of point-name -> integer maps; point
/// names are "m<marking>" and "h<half-edge>".
pub fn orders_to_json(a: &OrderAssignment) -> Vec<BTreeMap<String, i64>> {
    a.orders()
        .iter()
        .map(|m| m.iter().map(|(p, &v)| (p.to_string(), v)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    #[test]
    fn graph_round_trip() {
        let g = banana_two_four();
        let j = GraphJson::from_graph(&g);
        let text = serde_json::to_string(&j).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn input_document_parses() {
        let text = r#"{
            "graph": {
                "vertices": [{"genus": 2}, {"genus": 0}],
                "edges": [[0, 1], [0, 1]],
                "legs": [{"marking": 1, "vertex": 1}]
            },
            "signature": [4],
            "structure": {
                "contact": [2, 2],
                "orientation": ["forward", "forward"],
                "degenerate": [false, true]
            }
        }"#;
        let input: InputJson = serde_json::from_str(text).unwrap();
        let (graph, mu, structure) = input.parse_parts().unwrap();
        assert_eq!(graph, banana_two_four());
        assert_eq!(mu.entries(), &[4]);
        assert_eq!(structure.unwrap(), banana_structure(2, 2));
    }

    #[test]
    fn monoid_serialization() {
        let m = crate::minmonoid::minimal_monoid(&worked_example());
        let j = monoid_to_json(&m).unwrap();
        assert_eq!(j.ambient_rank, 1);
        assert_eq!(j.hilbert_basis, vec![vec![1]]);
        assert_eq!(j.images["e0"], vec![1]);
        assert_eq!(j.images["v1"], vec![2]);
    }

    #[test]
    fn magnitude_bound_enforced() {
        let input = InputJson {
            graph: GraphJson::from_graph(&single_vertex(1, 1)),
            signature: vec![(1 << 53) + 1],
            structure: None,
        };
        assert!(matches!(
            input.parse_parts(),
            Err(JsonError::OutOfRange { .. })
        ));
    }
}
