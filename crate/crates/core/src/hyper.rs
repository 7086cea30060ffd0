//! Hyperelliptic structure layer: involution compatibility, double-cover
//! sanity checks against the rational quotient, signature bookkeeping, and
//! the quadratic pushforward.
//!
//! The signature of a hyperelliptic differential splits into contact orders
//! at involution-fixed markings (all even; every fixed point is marked, so
//! there are 2g + 2 of them) and contact orders along swapped marking pairs.
//! Non-emptiness of the corresponding stratum is the single linear condition
//! n1 - 4 = sum(m_i) + 2 sum(c_j).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stablegraph::{check_involution, GraphInvolution, Signature, StableGraph};
use crate::twist::WeightedGraph;

/// Contact data of a hyperelliptic differential: orders `mu1` at the
/// involution-fixed markings and orders `pairs` at the swapped marking pairs
/// (each entry counts once for a conjugate pair).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypSignature {
    mu1: Vec<i64>,
    pairs: Vec<i64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypError {
    #[error("fixed-marking contact order {value} at position {index} must be even and >= 0")]
    BadFixedOrder { index: usize, value: i64 },
    #[error("conjugate-pair contact order {value} at position {index} must be positive")]
    BadPairOrder { index: usize, value: i64 },
    #[error("signature fails the non-emptiness equation")]
    Empty,
}

impl HypSignature {
    pub fn new(mu1: Vec<i64>, pairs: Vec<i64>) -> Result<Self, HypError> {
        for (i, &m) in mu1.iter().enumerate() {
            if m < 0 || m % 2 != 0 {
                return Err(HypError::BadFixedOrder { index: i, value: m });
            }
        }
        for (i, &c) in pairs.iter().enumerate() {
            if c <= 0 {
                return Err(HypError::BadPairOrder { index: i, value: c });
            }
        }
        Ok(HypSignature { mu1, pairs })
    }

    pub fn mu1(&self) -> &[i64] {
        &self.mu1
    }

    pub fn pairs(&self) -> &[i64] {
        &self.pairs
    }

    pub fn n1(&self) -> usize {
        self.mu1.len()
    }

    pub fn n2(&self) -> usize {
        self.pairs.len()
    }

    /// The non-emptiness equation n1 - 4 = sum(m_i) + 2 sum(c_j); with all
    /// fixed points marked, n1 = 2g + 2 so the left side is 2g - 2.
    pub fn check_nonempty(&self) -> bool {
        let lhs = self.n1() as i64 - 4;
        let rhs: i64 = self.mu1.iter().sum::<i64>() + 2 * self.pairs.iter().sum::<i64>();
        lhs == rhs
    }
}

/// Signature of the induced quadratic differential on the rational quotient:
/// the fixed-marking orders followed by the doubled pair orders.
pub fn quadratic_pushforward(sig: &HypSignature) -> Result<Signature, HypError> {
    if !sig.check_nonempty() {
        return Err(HypError::Empty);
    }
    let mut out = sig.mu1.to_vec();
    out.extend(sig.pairs.iter().map(|c| 2 * c));
    // the pushforward satisfies the same equation
    debug_assert_eq!(out.iter().sum::<i64>(), sig.n1() as i64 - 4);
    Ok(Signature(out))
}

/// Partition of the edges into involution-fixed edges and swapped pairs,
/// each pair listed once as (smaller index, larger index).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOrbitSplit {
    pub fixed: Vec<usize>,
    pub swapped: Vec<(usize, usize)>,
}

pub fn edge_orbit_split(graph: &StableGraph, inv: &GraphInvolution) -> EdgeOrbitSplit {
    let mut fixed = Vec::new();
    let mut swapped = Vec::new();
    for e in 0..graph.num_edges() {
        let img = inv.edge_map(e);
        if img == e {
            fixed.push(e);
        } else if e < img {
            swapped.push((e, img));
        }
    }
    EdgeOrbitSplit { fixed, swapped }
}

/// Compatibility of an involution with a twisted structure: the degeneracy
/// partition is stable, contact orders agree at paired markings and paired
/// edges, and orientations are carried onto orientations (an oriented edge
/// must map source half to source half, which is what makes the induced
/// symbol permutation a map of monoids).
pub fn check_involution_compat(w: &WeightedGraph, inv: &GraphInvolution) -> bool {
    if !check_involution(&w.graph, inv) {
        return false;
    }
    let t = &w.structure;
    if t.check_shape(&w.graph).is_err() {
        return false;
    }
    for v in 0..w.graph.num_vertices() {
        if t.degenerate[inv.vertex_map[v]] != t.degenerate[v] {
            return false;
        }
    }
    for (l, leg) in w.graph.legs().iter().enumerate() {
        let img = &w.graph.legs()[inv.leg_map[l]];
        if w.signature.at_marking(leg.marking) != w.signature.at_marking(img.marking) {
            return false;
        }
    }
    for e in 0..w.graph.num_edges() {
        let img = inv.edge_map(e);
        if t.contact[e] != t.contact[img] {
            return false;
        }
        if t.contact[e] > 0 {
            // outgoing half-edges must map to outgoing half-edges
            for side in 0..2 {
                let h = 2 * e + side;
                if t.is_outgoing(h) != t.is_outgoing(inv.half_edge_map[h]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Why a configuration fails to look like a double cover of a tree of
/// rational curves.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverDiagnostic {
    #[error("involution is not structure-preserving")]
    InvalidInvolution,
    #[error("vertex {vertex}: fixed component has {fixed_points} fixed special points, expected {expected}")]
    RamificationCount {
        vertex: usize,
        fixed_points: usize,
        expected: i64,
    },
    #[error("vertex {vertex}: swapped component must be rational")]
    SwappedNotRational { vertex: usize },
    #[error("quotient not a tree")]
    QuotientNotTree,
}

/// Necessary double-cover constraints on (G, iota): every involution-fixed
/// vertex covers a rational component 2:1, so it carries exactly 2g_v + 2
/// fixed special points; swapped vertices map isomorphically and must be
/// rational; and the quotient graph must be a tree.
///
/// All fixed points of the involution are assumed to be marked, so counting
/// fixed legs and fixed half-edges sees every ramification point.
pub fn quotient_cover_check(
    graph: &StableGraph,
    inv: &GraphInvolution,
) -> Result<(), CoverDiagnostic> {
    if !check_involution(graph, inv) {
        return Err(CoverDiagnostic::InvalidInvolution);
    }
    for v in 0..graph.num_vertices() {
        let g_v = graph.vertices()[v].genus;
        if inv.vertex_map[v] == v {
            let fixed_legs = graph
                .legs()
                .iter()
                .enumerate()
                .filter(|(l, leg)| leg.vertex == v && inv.leg_map[*l] == *l)
                .count();
            let fixed_halves = (0..graph.num_half_edges())
                .filter(|&h| graph.half_edge_vertex(h) == v && inv.half_edge_map[h] == h)
                .count();
            let fixed_points = fixed_legs + fixed_halves;
            let expected = 2 * g_v + 2;
            if fixed_points as i64 != expected {
                return Err(CoverDiagnostic::RamificationCount {
                    vertex: v,
                    fixed_points,
                    expected,
                });
            }
        } else if g_v != 0 {
            return Err(CoverDiagnostic::SwappedNotRational { vertex: v });
        }
    }
    // quotient graph: vertex orbits; edges survive as nodes unless the edge
    // is fixed with swapped branches (those become smooth points downstairs)
    let vertex_orbits = (0..graph.num_vertices())
        .filter(|&v| inv.vertex_map[v] >= v)
        .count();
    let split = edge_orbit_split(graph, inv);
    let surviving_edges = split.swapped.len()
        + split
            .fixed
            .iter()
            .filter(|&&e| !inv.swaps_branches(e))
            .count();
    let betti = surviving_edges as i64 - vertex_orbits as i64 + 1;
    if betti != 0 {
        return Err(CoverDiagnostic::QuotientNotTree);
    }
    Ok(())
}
