//! Dual graphs of marked nodal curves.
//!
//! Vertices carry a genus, legs carry marking indices, and every edge is a
//! pair of half-edges so that loops and edge involutions stay unambiguous:
//! an involution may fix an edge while swapping its two branches, and the
//! half-edge map records exactly that.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::twist::{EdgeOrientation, TwistedStructure};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub genus: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    /// 1-based marking index; the set over a valid graph is exactly 1..=n.
    pub marking: usize,
    pub vertex: usize,
}

/// An edge is a pair of half-edges; `halves[i]` is the vertex carrying
/// half-edge `i`. The flat half-edge id of side `i` of edge `e` is `2e + i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub halves: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableGraph {
    vertices: Vec<Vertex>,
    legs: Vec<Leg>,
    edges: Vec<Edge>,
}

/// Signature of a differential: one nonnegative contact order per marking,
/// positionally indexed (entry i-1 belongs to marking i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature(pub Vec<i64>);

impl Signature {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Contact order at the given 1-based marking.
    pub fn at_marking(&self, marking: usize) -> i64 {
        self.0[marking - 1]
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("vertex {vertex} has negative genus {genus}")]
    NegativeGenus { vertex: usize, genus: i64 },
}

/// First violated validity rule of a (graph, signature) pair.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("not connected")]
    NotConnected,
    #[error("marking {0} missing")]
    MarkingMissing(usize),
    #[error("marking {0} appears more than once")]
    MarkingDuplicate(usize),
    #[error("signature has {signature} entries but the graph has {legs} legs")]
    MarkingCountMismatch { signature: usize, legs: usize },
    #[error("negative entry {value} at marking {marking}")]
    NegativeSignatureEntry { marking: usize, value: i64 },
    #[error("degree mismatch {total} != {expected}")]
    DegreeMismatch { total: i64, expected: i64 },
}

impl StableGraph {
    pub fn new(vertices: Vec<Vertex>, legs: Vec<Leg>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::NoVertices);
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.genus < 0 {
                return Err(GraphError::NegativeGenus {
                    vertex: i,
                    genus: v.genus,
                });
            }
        }
        let n = vertices.len();
        for leg in &legs {
            if leg.vertex >= n {
                return Err(GraphError::VertexOutOfRange(leg.vertex));
            }
        }
        for e in &edges {
            for &v in &e.halves {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange(v));
                }
            }
        }
        Ok(StableGraph { vertices, legs, edges })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_half_edges(&self) -> usize {
        2 * self.edges.len()
    }

    /// Vertex carrying the flat half-edge id `h = 2e + side`.
    pub fn half_edge_vertex(&self, h: usize) -> usize {
        self.edges[h / 2].halves[h % 2]
    }

    pub fn edge_of_half(h: usize) -> usize {
        h / 2
    }

    pub fn partner(h: usize) -> usize {
        h ^ 1
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].halves[0] == self.edges[e].halves[1]
    }

    fn component_count(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for e in &self.edges {
            let a = find(&mut parent, e.halves[0]);
            let b = find(&mut parent, e.halves[1]);
            if a != b {
                parent[a] = b;
            }
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// Total (arithmetic) genus: sum of vertex genera plus the first Betti
    /// number of the graph.
    pub fn genus(&self) -> i64 {
        let vertex_genus: i64 = self.vertices.iter().map(|v| v.genus).sum();
        let betti = self.edges.len() as i64 - self.vertices.len() as i64
            + self.component_count() as i64;
        vertex_genus + betti
    }

    /// Checks connectivity, marking bijectivity, and the degree condition
    /// sum(mu) = 2g - 2; reports the first violated rule.
    pub fn validate(&self, mu: &Signature) -> Result<(), ValidationError> {
        if self.component_count() != 1 {
            return Err(ValidationError::NotConnected);
        }
        if mu.len() != self.legs.len() {
            return Err(ValidationError::MarkingCountMismatch {
                signature: mu.len(),
                legs: self.legs.len(),
            });
        }
        let n = self.legs.len();
        let mut count = vec![0usize; n + 1];
        for leg in &self.legs {
            if leg.marking == 0 || leg.marking > n {
                return Err(ValidationError::MarkingMissing(leg.marking));
            }
            count[leg.marking] += 1;
        }
        for m in 1..=n {
            if count[m] == 0 {
                return Err(ValidationError::MarkingMissing(m));
            }
            if count[m] > 1 {
                return Err(ValidationError::MarkingDuplicate(m));
            }
        }
        for (i, &m) in mu.entries().iter().enumerate() {
            if m < 0 {
                return Err(ValidationError::NegativeSignatureEntry {
                    marking: i + 1,
                    value: m,
                });
            }
        }
        let expected = 2 * self.genus() - 2;
        if mu.total() != expected {
            return Err(ValidationError::DegreeMismatch {
                total: mu.total(),
                expected,
            });
        }
        Ok(())
    }

    /// Graphviz DOT rendering; edges are labeled with contact orders and
    /// oriented when a twisted structure is supplied. Output is
    /// deterministic, UTF-8, LF line endings.
    pub fn to_dot(&self, structure: Option<&TwistedStructure>) -> String {
        let mut out = String::from("digraph G {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"v{i} g={}\"];\n", v.genus));
        }
        for leg in &self.legs {
            let m = leg.marking;
            out.push_str(&format!("  m{m} [shape=plaintext, label=\"σ{m}\"];\n"));
            out.push_str(&format!("  v{} -> m{m} [dir=none, style=dotted];\n", leg.vertex));
        }
        for (e, edge) in self.edges.iter().enumerate() {
            let (a, b) = (edge.halves[0], edge.halves[1]);
            match structure {
                None => out.push_str(&format!("  v{a} -> v{b} [dir=none];\n")),
                Some(t) => {
                    let c = t.contact[e];
                    match t.orientation[e] {
                        EdgeOrientation::Forward => {
                            out.push_str(&format!("  v{a} -> v{b} [label=\"c={c}\"];\n"))
                        }
                        EdgeOrientation::Backward => {
                            out.push_str(&format!("  v{b} -> v{a} [label=\"c={c}\"];\n"))
                        }
                        EdgeOrientation::None => out.push_str(&format!(
                            "  v{a} -> v{b} [dir=none, label=\"c={c}\"];\n"
                        )),
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// An order <= 2 symmetry of a stable graph, given on every cell. The edge
/// action is recorded on half-edges so that branch swaps at a fixed node are
/// visible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInvolution {
    pub vertex_map: Vec<usize>,
    /// image of each flat half-edge id 2e + side
    pub half_edge_map: Vec<usize>,
    pub leg_map: Vec<usize>,
}

impl GraphInvolution {
    pub fn identity(graph: &StableGraph) -> Self {
        GraphInvolution {
            vertex_map: (0..graph.num_vertices()).collect(),
            half_edge_map: (0..graph.num_half_edges()).collect(),
            leg_map: (0..graph.legs().len()).collect(),
        }
    }

    /// Image of an edge index under the half-edge map.
    pub fn edge_map(&self, e: usize) -> usize {
        self.half_edge_map[2 * e] / 2
    }

    /// True when the involution fixes edge e while exchanging its branches.
    pub fn swaps_branches(&self, e: usize) -> bool {
        self.half_edge_map[2 * e] == 2 * e + 1
    }
}

fn is_permutation(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &x in map {
        if x >= n || hit[x] {
            return false;
        }
        hit[x] = true;
    }
    true
}

/// True iff the maps have order <= 2 and preserve incidence and genus.
pub fn check_involution(graph: &StableGraph, inv: &GraphInvolution) -> bool {
    let nv = graph.num_vertices();
    let nh = graph.num_half_edges();
    let nl = graph.legs().len();
    if !is_permutation(&inv.vertex_map, nv)
        || !is_permutation(&inv.half_edge_map, nh)
        || !is_permutation(&inv.leg_map, nl)
    {
        return false;
    }
    // order <= 2
    if (0..nv).any(|v| inv.vertex_map[inv.vertex_map[v]] != v)
        || (0..nh).any(|h| inv.half_edge_map[inv.half_edge_map[h]] != h)
        || (0..nl).any(|l| inv.leg_map[inv.leg_map[l]] != l)
    {
        return false;
    }
    // half-edge pairing: partners map to partners
    if (0..nh).any(|h| inv.half_edge_map[StableGraph::partner(h)] != StableGraph::partner(inv.half_edge_map[h])) {
        return false;
    }
    // incidence
    if (0..nh).any(|h| graph.half_edge_vertex(inv.half_edge_map[h]) != inv.vertex_map[graph.half_edge_vertex(h)]) {
        return false;
    }
    if (0..nl).any(|l| graph.legs()[inv.leg_map[l]].vertex != inv.vertex_map[graph.legs()[l].vertex]) {
        return false;
    }
    // genus
    if (0..nv).any(|v| graph.vertices()[inv.vertex_map[v]].genus != graph.vertices()[v].genus) {
        return false;
    }
    true
}
