//! Shared fixtures for unit tests.

use crate::stablegraph::{Edge, Leg, StableGraph, Vertex};
use crate::twist::{EdgeOrientation, TwistedStructure, WeightedGraph};
use crate::Signature;

pub fn single_vertex(genus: i64, markings: usize) -> StableGraph {
    StableGraph::new(
        vec![Vertex { genus }],
        (1..=markings).map(|m| Leg { marking: m, vertex: 0 }).collect(),
        vec![],
    )
    .unwrap()
}

/// Genus-3 graph: v0 of genus 2 and a rational v1 joined by two parallel
/// edges, one marking on v1. With both edges of contact order 2 this is the
/// boundary configuration whose minimal monoid is N.
pub fn banana_two_four() -> StableGraph {
    StableGraph::new(
        vec![Vertex { genus: 2 }, Vertex { genus: 0 }],
        vec![Leg { marking: 1, vertex: 1 }],
        vec![Edge { halves: [0, 1] }, Edge { halves: [0, 1] }],
    )
    .unwrap()
}

/// Structure on `banana_two_four` with both edges oriented v0 -> v1 and the
/// given contact orders (0 means unoriented).
pub fn banana_structure(c0: i64, c1: i64) -> TwistedStructure {
    let orient = |c: i64| {
        if c == 0 {
            EdgeOrientation::None
        } else {
            EdgeOrientation::Forward
        }
    };
    TwistedStructure {
        contact: vec![c0, c1],
        orientation: vec![orient(c0), orient(c1)],
        degenerate: vec![false, true],
    }
}

pub fn worked_example() -> WeightedGraph {
    WeightedGraph {
        graph: banana_two_four(),
        signature: Signature(vec![4]),
        structure: banana_structure(2, 2),
    }
}

/// Two rational vertices joined by two parallel edges: total genus 1, empty
/// signature, both contact orders zero.
pub fn genus_one_banana() -> StableGraph {
    StableGraph::new(
        vec![Vertex { genus: 0 }, Vertex { genus: 0 }],
        vec![],
        vec![Edge { halves: [0, 1] }, Edge { halves: [0, 1] }],
    )
    .unwrap()
}

pub fn genus_one_banana_weighted() -> WeightedGraph {
    WeightedGraph {
        graph: genus_one_banana(),
        signature: Signature(vec![]),
        structure: TwistedStructure {
            contact: vec![0, 0],
            orientation: vec![EdgeOrientation::None, EdgeOrientation::None],
            degenerate: vec![false, false],
        },
    }
}

/// v0 (nondegenerate, genus 1) -> v1 (degenerate, genus 1), one edge of
/// contact order 1, markings of order 0 and 2. All residuals vanish and the
/// minimal monoid is N with e_l and e_{v1} both mapping to 1.
pub fn chain_two() -> WeightedGraph {
    let graph = StableGraph::new(
        vec![Vertex { genus: 1 }, Vertex { genus: 1 }],
        vec![
            Leg { marking: 1, vertex: 0 },
            Leg { marking: 2, vertex: 1 },
        ],
        vec![Edge { halves: [0, 1] }],
    )
    .unwrap();
    WeightedGraph {
        graph,
        signature: Signature(vec![0, 2]),
        structure: TwistedStructure {
            contact: vec![1],
            orientation: vec![EdgeOrientation::Forward],
            degenerate: vec![false, true],
        },
    }
}
