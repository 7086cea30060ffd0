//! Twisted structures on a stable graph: per-edge contact orders and
//! orientations together with the degeneracy partition of the vertices.
//!
//! A structure is admissible when the induced meromorphic differential on
//! each component has total degree 2g_v - 2; `degree_residual` measures the
//! failure vertex by vertex. Whether an admissible structure is actually
//! realizable over a log point is approximated by the minimal-monoid
//! conditions in `is_consistent`: the monoid must be sharp, every smoothing
//! element must survive, and a degeneracy must survive exactly at the
//! vertices flagged degenerate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::vec_is_zero;
use crate::minmonoid::{self, MSymbol};
use crate::stablegraph::{Signature, StableGraph, ValidationError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeOrientation {
    /// oriented from halves[0] to halves[1]
    Forward,
    /// oriented from halves[1] to halves[0]
    Backward,
    /// unoriented; exactly the contact-order-zero case
    None,
}

/// Contact orders, orientations and degeneracy flags, all indexed by edge
/// (respectively vertex) position in the underlying graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwistedStructure {
    pub contact: Vec<i64>,
    pub orientation: Vec<EdgeOrientation>,
    pub degenerate: Vec<bool>,
}

/// A dual graph with a signature and a twisted structure: the weighted graph
/// of a degenerating differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    pub graph: StableGraph,
    pub signature: Signature,
    pub structure: TwistedStructure,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwistError {
    #[error("structure has {got} contact orders for {expected} edges")]
    ContactShape { expected: usize, got: usize },
    #[error("structure has {got} orientations for {expected} edges")]
    OrientationShape { expected: usize, got: usize },
    #[error("structure has {got} degeneracy flags for {expected} vertices")]
    FlagShape { expected: usize, got: usize },
    #[error("negative contact order {value} on edge {edge}")]
    NegativeContact { edge: usize, value: i64 },
    #[error("edge {edge} has contact order {value} but no orientation")]
    UnorientedPositive { edge: usize, value: i64 },
    #[error("edge {edge} is oriented but has contact order zero")]
    OrientedZero { edge: usize },
    #[error("invalid graph/signature: {0}")]
    InvalidInput(#[from] ValidationError),
}

impl TwistedStructure {
    /// Shape and orientation coherence: one contact order and orientation per
    /// edge, one flag per vertex, contacts nonnegative, and an orientation is
    /// `None` exactly when the contact order is zero.
    pub fn check_shape(&self, graph: &StableGraph) -> Result<(), TwistError> {
        if self.contact.len() != graph.num_edges() {
            return Err(TwistError::ContactShape {
                expected: graph.num_edges(),
                got: self.contact.len(),
            });
        }
        if self.orientation.len() != graph.num_edges() {
            return Err(TwistError::OrientationShape {
                expected: graph.num_edges(),
                got: self.orientation.len(),
            });
        }
        if self.degenerate.len() != graph.num_vertices() {
            return Err(TwistError::FlagShape {
                expected: graph.num_vertices(),
                got: self.degenerate.len(),
            });
        }
        for (e, &c) in self.contact.iter().enumerate() {
            if c < 0 {
                return Err(TwistError::NegativeContact { edge: e, value: c });
            }
            match self.orientation[e] {
                EdgeOrientation::None if c > 0 => {
                    return Err(TwistError::UnorientedPositive { edge: e, value: c })
                }
                EdgeOrientation::Forward | EdgeOrientation::Backward if c == 0 => {
                    return Err(TwistError::OrientedZero { edge: e })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Source vertex of an oriented edge, None when unoriented.
    pub fn source(&self, graph: &StableGraph, e: usize) -> Option<usize> {
        match self.orientation[e] {
            EdgeOrientation::Forward => Some(graph.edges()[e].halves[0]),
            EdgeOrientation::Backward => Some(graph.edges()[e].halves[1]),
            EdgeOrientation::None => None,
        }
    }

    pub fn target(&self, graph: &StableGraph, e: usize) -> Option<usize> {
        match self.orientation[e] {
            EdgeOrientation::Forward => Some(graph.edges()[e].halves[1]),
            EdgeOrientation::Backward => Some(graph.edges()[e].halves[0]),
            EdgeOrientation::None => None,
        }
    }

    /// Is the flat half-edge `h` the outgoing side of its edge?
    pub fn is_outgoing(&self, h: usize) -> bool {
        match self.orientation[h / 2] {
            EdgeOrientation::Forward => h % 2 == 0,
            EdgeOrientation::Backward => h % 2 == 1,
            EdgeOrientation::None => false,
        }
    }

    pub fn is_incoming(&self, h: usize) -> bool {
        !matches!(self.orientation[h / 2], EdgeOrientation::None) && !self.is_outgoing(h)
    }
}

/// Per-vertex failure of the degree condition.
///
/// For each vertex this sums the orders the structure induces at its special
/// points (markings m_i, outgoing nodes c-1, unoriented nodes -1, incoming
/// nodes -(c+1)) and subtracts 2g_v - 2. Zero everywhere characterizes
/// admissible structures; loops contribute -2 through their two unoriented
/// incidences.
pub fn degree_residual(
    graph: &StableGraph,
    mu: &Signature,
    t: &TwistedStructure,
) -> Result<Vec<i64>, TwistError> {
    t.check_shape(graph)?;
    let mut res = vec![0i64; graph.num_vertices()];
    for leg in graph.legs() {
        res[leg.vertex] += mu.at_marking(leg.marking);
    }
    for h in 0..graph.num_half_edges() {
        let v = graph.half_edge_vertex(h);
        let c = t.contact[h / 2];
        if t.is_outgoing(h) {
            res[v] += c - 1;
        } else if t.is_incoming(h) {
            res[v] -= c + 1;
        } else {
            res[v] -= 1;
        }
    }
    for (v, r) in res.iter_mut().enumerate() {
        *r -= 2 * graph.vertices()[v].genus - 2;
    }
    Ok(res)
}

/// The degeneracy partition forced by the orientations: a vertex is
/// degenerate exactly when some oriented edge points into it (the section
/// degenerates strictly faster there than on the source side).
pub fn forced_degeneracy(graph: &StableGraph, t: &TwistedStructure) -> Vec<bool> {
    let mut degenerate = vec![false; graph.num_vertices()];
    for e in 0..graph.num_edges() {
        if let Some(dst) = t.target(graph, e) {
            degenerate[dst] = true;
        }
    }
    degenerate
}

/// Do the oriented edges form a directed acyclic graph? A directed cycle
/// would force the smoothing elements along it to sum to zero, which no
/// sharp base monoid allows.
pub fn oriented_acyclic(graph: &StableGraph, t: &TwistedStructure) -> bool {
    let n = graph.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for e in 0..graph.num_edges() {
        if let Some(src) = t.source(graph, e) {
            adj[src].push(t.target(graph, e).expect("oriented edge has a target"));
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    fn dfs(v: usize, adj: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &w in &adj[v] {
            match state[w] {
                1 => return false,
                0 => {
                    if !dfs(w, adj, state) {
                        return false;
                    }
                }
                _ => {}
            }
        }
        state[v] = 2;
        true
    }
    (0..n).all(|v| state[v] != 0 || dfs(v, &adj, &mut state))
}

/// Consistency of a structure with some sharp base monoid: the minimal
/// monoid must be sharp, every smoothing element e_l must be nonzero, and
/// the degeneracy e_v must be nonzero exactly at the flagged vertices.
pub fn is_consistent(graph: &StableGraph, mu: &Signature, t: &TwistedStructure) -> bool {
    if t.check_shape(graph).is_err() {
        return false;
    }
    let w = WeightedGraph {
        graph: graph.clone(),
        signature: mu.clone(),
        structure: t.clone(),
    };
    let m = minmonoid::minimal_monoid(&w);
    if !m.monoid.is_sharp() {
        return false;
    }
    for e in 0..graph.num_edges() {
        if vec_is_zero(&m.images[&MSymbol::Edge(e)]) {
            return false;
        }
    }
    for v in 0..graph.num_vertices() {
        let degenerate = !vec_is_zero(&m.images[&MSymbol::Vertex(v)]);
        if degenerate != t.degenerate[v] {
            return false;
        }
    }
    true
}

/// All twisted structures on (G, mu) with contact orders at most
/// `max_contact`: exactly those with zero residual at every vertex,
/// orientations matching the contacts (unoriented iff zero, loops forced to
/// zero), acyclic oriented edges, and the degeneracy partition forced by the
/// orientations. The output order is deterministic, and raising the bound
/// only ever adds structures.
pub fn enumerate_structures(
    graph: &StableGraph,
    mu: &Signature,
    max_contact: i64,
) -> Result<Vec<TwistedStructure>, TwistError> {
    graph.validate(mu)?;
    let ne = graph.num_edges();

    // per-edge choices: (orientation, contact)
    let mut choices: Vec<Vec<(EdgeOrientation, i64)>> = Vec::with_capacity(ne);
    for e in 0..ne {
        let mut opts = vec![(EdgeOrientation::None, 0)];
        if !graph.is_loop(e) {
            for c in 1..=max_contact {
                opts.push((EdgeOrientation::Forward, c));
                opts.push((EdgeOrientation::Backward, c));
            }
        }
        choices.push(opts);
    }

    let mut found = Vec::new();
    let mut pick = vec![0usize; ne];
    'outer: loop {
        let mut orientation = Vec::with_capacity(ne);
        let mut contact = Vec::with_capacity(ne);
        for e in 0..ne {
            let (o, c) = choices[e][pick[e]];
            orientation.push(o);
            contact.push(c);
        }
        let mut t = TwistedStructure {
            contact,
            orientation,
            degenerate: vec![false; graph.num_vertices()],
        };
        if oriented_acyclic(graph, &t)
            && degree_residual(graph, mu, &t)?.iter().all(|&r| r == 0)
        {
            t.degenerate = forced_degeneracy(graph, &t);
            found.push(t);
        }
        // advance the mixed-radix counter
        for e in 0..ne {
            pick[e] += 1;
            if pick[e] < choices[e].len() {
                continue 'outer;
            }
            pick[e] = 0;
        }
        break;
    }
    found.sort();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    #[test]
    fn residuals_on_worked_example() {
        let g = banana_two_four();
        let t = banana_structure(2, 2);
        let res = degree_residual(&g, &Signature(vec![4]), &t).unwrap();
        assert_eq!(res, vec![0, 0]);

        let t13 = banana_structure(1, 3);
        let res = degree_residual(&g, &Signature(vec![4]), &t13).unwrap();
        assert_eq!(res, vec![0, 0]);
    }

    #[test]
    fn residuals_on_smooth_vertex() {
        let g = single_vertex(2, 1);
        let t = TwistedStructure {
            contact: vec![],
            orientation: vec![],
            degenerate: vec![false],
        };
        let res = degree_residual(&g, &Signature(vec![2]), &t).unwrap();
        assert_eq!(res, vec![0]);
    }

    #[test]
    fn residuals_on_genus_one_banana() {
        let g = genus_one_banana();
        let t = TwistedStructure {
            contact: vec![0, 0],
            orientation: vec![EdgeOrientation::None, EdgeOrientation::None],
            degenerate: vec![false, false],
        };
        let res = degree_residual(&g, &Signature(vec![]), &t).unwrap();
        assert_eq!(res, vec![0, 0]);
    }

    #[test]
    fn loop_contributes_minus_two() {
        use crate::stablegraph::{Edge, StableGraph, Vertex};
        let g = StableGraph::new(
            vec![Vertex { genus: 0 }],
            vec![crate::stablegraph::Leg { marking: 1, vertex: 0 }],
            vec![Edge { halves: [0, 0] }],
        )
        .unwrap();
        let t = TwistedStructure {
            contact: vec![0],
            orientation: vec![EdgeOrientation::None],
            degenerate: vec![false],
        };
        // genus 1, mu = (0): 0 - 2 - (2*0 - 2) = 0
        let res = degree_residual(&g, &Signature(vec![0]), &t).unwrap();
        assert_eq!(res, vec![0]);
    }

    #[test]
    fn consistency_examples() {
        let g = banana_two_four();
        let mu = Signature(vec![4]);
        assert!(is_consistent(&g, &mu, &banana_structure(2, 2)));

        // flagging the degenerate target nondegenerate collapses e_l
        let mut bad = banana_structure(2, 2);
        bad.degenerate = vec![false, false];
        assert!(!is_consistent(&g, &mu, &bad));

        // directed 2-cycle: e_{l1} + e_{l2} = 0 kills sharpness
        let g2 = genus_one_banana();
        let t = TwistedStructure {
            contact: vec![1, 1],
            orientation: vec![EdgeOrientation::Forward, EdgeOrientation::Backward],
            degenerate: vec![true, true],
        };
        assert!(!is_consistent(&g2, &Signature(vec![]), &t));
    }

    #[test]
    fn enumerate_worked_example() {
        let g = banana_two_four();
        let list = enumerate_structures(&g, &Signature(vec![4]), 10).unwrap();
        assert_eq!(list.len(), 5);
        let mut pairs: Vec<(i64, i64)> =
            list.iter().map(|t| (t.contact[0], t.contact[1])).collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]);
        for t in &list {
            // every positive edge points from v0 to v1, v0 nondegenerate, v1 degenerate
            for e in 0..2 {
                match t.orientation[e] {
                    EdgeOrientation::Forward => assert!(t.contact[e] > 0),
                    EdgeOrientation::None => assert_eq!(t.contact[e], 0),
                    EdgeOrientation::Backward => panic!("unexpected orientation"),
                }
            }
            assert_eq!(t.degenerate, vec![false, true]);
        }
    }

    #[test]
    fn enumerate_smooth_vertex() {
        let g = single_vertex(2, 1);
        let list = enumerate_structures(&g, &Signature(vec![2]), 5).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].degenerate, vec![false]);
    }

    #[test]
    fn enumerate_genus_one_banana() {
        let g = genus_one_banana();
        let list = enumerate_structures(&g, &Signature(vec![]), 6).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].contact, vec![0, 0]);
        assert_eq!(list[0].degenerate, vec![false, false]);
    }

    #[test]
    fn enumerated_structures_are_sound() {
        let g = banana_two_four();
        let mu = Signature(vec![4]);
        for t in enumerate_structures(&g, &mu, 6).unwrap() {
            assert!(degree_residual(&g, &mu, &t).unwrap().iter().all(|&r| r == 0));
            assert!(oriented_acyclic(&g, &t));
            assert_eq!(t.degenerate, forced_degeneracy(&g, &t));
            // telescoping: edge terms cancel in pairs, so the signature total
            // must match 2g - 2
            assert_eq!(mu.total(), 2 * g.genus() - 2);
        }
    }

    #[test]
    fn enumeration_monotone_in_bound() {
        let g = banana_two_four();
        let mu = Signature(vec![4]);
        let small = enumerate_structures(&g, &mu, 3).unwrap();
        let large = enumerate_structures(&g, &mu, 10).unwrap();
        for t in &small {
            assert!(large.contains(t));
        }
    }

    #[test]
    fn enumeration_invariant_under_relabeling() {
        use crate::stablegraph::{Edge, Leg, StableGraph, Vertex};
        let g = banana_two_four();
        // swap the vertex labels
        let relabeled = StableGraph::new(
            vec![Vertex { genus: 0 }, Vertex { genus: 2 }],
            vec![Leg { marking: 1, vertex: 0 }],
            vec![Edge { halves: [1, 0] }, Edge { halves: [1, 0] }],
        )
        .unwrap();
        let mu = Signature(vec![4]);
        let a = enumerate_structures(&g, &mu, 6).unwrap();
        let b = enumerate_structures(&relabeled, &mu, 6).unwrap();
        assert_eq!(a.len(), b.len());
        // transport each structure through the relabeling and compare as sets
        let mapped: std::collections::BTreeSet<_> = b
            .into_iter()
            .map(|t| TwistedStructure {
                contact: t.contact,
                orientation: t.orientation,
                degenerate: vec![t.degenerate[1], t.degenerate[0]],
            })
            .collect();
        let original: std::collections::BTreeSet<_> = a.into_iter().collect();
        assert_eq!(original, mapped);
    }

    #[test]
    fn shape_errors() {
        let g = banana_two_four();
        let t = TwistedStructure {
            contact: vec![2],
            orientation: vec![EdgeOrientation::Forward],
            degenerate: vec![false, true],
        };
        assert_eq!(
            degree_residual(&g, &Signature(vec![4]), &t),
            Err(TwistError::ContactShape { expected: 2, got: 1 })
        );
    }
}
