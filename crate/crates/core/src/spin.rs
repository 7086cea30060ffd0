//! Spin parity for even signatures.
//!
//! For a signature with all entries even, half the induced divisor defines a
//! square root of the dualizing bundle on each component. Odd-contact nodes
//! are handled by the orbifold bookkeeping: their smoothing parameters double
//! and sections must vanish there, so those nodes are cut and the spin
//! coefficient at the detached branch drops to the floor of the half-order.
//! On all-rational curves the space of global sections is then an exact
//! kernel computation: polynomials of bounded degree on each component,
//! matched at the surviving nodes up to an explicit gluing sign. The parity
//! of its dimension is the invariant of interest.
//!
//! The gluing signs are explicit input: they are the finitely many discrete
//! choices of the lift that the log structure leaves open, and flipping one
//! of them around a cycle is exactly what flips the parity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffdata::PointId;
use crate::intlat::IntMatrix;
use crate::minmonoid::{self, MSymbol, MinimalMonoid};
use crate::stablegraph::{Signature, ValidationError};
use crate::twist::{degree_residual, TwistError, WeightedGraph};

pub fn check_even_signature(mu: &Signature) -> bool {
    mu.entries().iter().all(|m| m % 2 == 0)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpinError {
    #[error("signature has an odd entry")]
    OddSignature,
    #[error(transparent)]
    InvalidInput(#[from] ValidationError),
    #[error(transparent)]
    Shape(#[from] TwistError),
    #[error("vertex {vertex} has nonzero degree residual {residual}")]
    NonzeroResidual { vertex: usize, residual: i64 },
    #[error("unsupported regime: vertex {vertex} has genus {genus}, only rational components are supported")]
    UnsupportedRegime { vertex: usize, genus: i64 },
    #[error("gluing signs must be given exactly on the even-contact edges")]
    SignShape,
}

/// Multipliers of the smoothing parameters under the orbifold lift: 1 at
/// even-contact edges, 2 at odd-contact edges (where the local chart is the
/// double cover (x, y) -> (x^2, y^2)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldLift {
    pub multiplier: Vec<i64>,
    pub even_edges: Vec<usize>,
    pub odd_edges: Vec<usize>,
}

pub fn orbifold_lift_map(w: &WeightedGraph) -> OrbifoldLift {
    let mut multiplier = Vec::with_capacity(w.graph.num_edges());
    let mut even_edges = Vec::new();
    let mut odd_edges = Vec::new();
    for (e, &c) in w.structure.contact.iter().enumerate() {
        if c % 2 == 0 {
            multiplier.push(1);
            even_edges.push(e);
        } else {
            multiplier.push(2);
            odd_edges.push(e);
        }
    }
    OrbifoldLift {
        multiplier,
        even_edges,
        odd_edges,
    }
}

/// Base change making every degeneracy divisible by 2: refines the minimal
/// monoid at all degenerate-vertex symbols and returns the 2-power index.
pub fn divisibility_base_change(w: &WeightedGraph) -> (MinimalMonoid, BigInt) {
    let m = minmonoid::minimal_monoid(w);
    let targets: Vec<MSymbol> = (0..w.graph.num_vertices())
        .filter(|&v| w.structure.degenerate[v])
        .map(MSymbol::Vertex)
        .collect();
    minmonoid::refine_for_halving(&m, &targets)
}

/// Per-vertex degrees and per-point coefficients of the spin divisor:
/// m_i/2 at markings, +-c/2 at oriented even branches, 0 at unoriented
/// branches, and the floor convention (c-1)/2 respectively -(c+1)/2 at odd
/// branches, where sections vanish after the orbifold normalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinDegrees {
    pub degree: Vec<i64>,
    pub divisor: Vec<BTreeMap<PointId, i64>>,
}

pub fn spin_degrees(w: &WeightedGraph) -> Result<SpinDegrees, SpinError> {
    if !check_even_signature(&w.signature) {
        return Err(SpinError::OddSignature);
    }
    let res = degree_residual(&w.graph, &w.signature, &w.structure)?;
    if let Some((v, &r)) = res.iter().enumerate().find(|(_, &r)| r != 0) {
        return Err(SpinError::NonzeroResidual { vertex: v, residual: r });
    }
    let mut divisor = vec![BTreeMap::new(); w.graph.num_vertices()];
    for leg in w.graph.legs() {
        divisor[leg.vertex].insert(
            PointId::Marking(leg.marking),
            w.signature.at_marking(leg.marking) / 2,
        );
    }
    for h in 0..w.graph.num_half_edges() {
        let v = w.graph.half_edge_vertex(h);
        let c = w.structure.contact[h / 2];
        let coeff = if w.structure.is_outgoing(h) {
            // (c-1)/2 at odd contacts is the floor of c/2
            if c % 2 == 0 {
                c / 2
            } else {
                (c - 1) / 2
            }
        } else if w.structure.is_incoming(h) {
            if c % 2 == 0 {
                -c / 2
            } else {
                -(c + 1) / 2
            }
        } else {
            0
        };
        divisor[v].insert(PointId::Half(h), coeff);
    }
    let degree = divisor.iter().map(|d| d.values().sum()).collect();
    Ok(SpinDegrees { degree, divisor })
}

/// One sign per even-contact edge, the residue of the discrete choice among
/// the log lifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSigns(pub BTreeMap<usize, i8>);

impl GluingSigns {
    /// Validates that the signs sit exactly on the even-contact edges.
    pub fn check(&self, w: &WeightedGraph) -> Result<(), SpinError> {
        let lift = orbifold_lift_map(w);
        let expected: Vec<usize> = lift.even_edges;
        let got: Vec<usize> = self.0.keys().copied().collect();
        if expected != got || self.0.values().any(|&s| s != 1 && s != -1) {
            return Err(SpinError::SignShape);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinInput {
    pub weighted: WeightedGraph,
    pub signs: GluingSigns,
}

/// Connected pieces of the graph after cutting all odd-contact edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPieces {
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub vertices: Vec<usize>,
    /// even-contact edges with both ends in the piece
    pub edges: Vec<usize>,
}

pub fn split_at_odd_edges(w: &WeightedGraph) -> RationalPieces {
    let n = w.graph.num_vertices();
    let lift = orbifold_lift_map(w);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for &e in &lift.even_edges {
        let [a, b] = w.graph.edges()[e].halves;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut groups: BTreeMap<usize, Piece> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_insert_with(|| Piece {
            vertices: vec![],
            edges: vec![],
        });
    }
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.get_mut(&r).unwrap().vertices.push(v);
    }
    for &e in &lift.even_edges {
        let r = find(&mut parent, w.graph.edges()[e].halves[0]);
        groups.get_mut(&r).unwrap().edges.push(e);
    }
    RationalPieces {
        pieces: groups.into_values().collect(),
    }
}

/// Branch coordinates: one small integer per half-edge, distinct among the
/// half-edges at each vertex. Generated deterministically from a seed by a
/// splitmix stream so that default runs are reproducible while staying off
/// the thin coincidence loci where evaluation functionals could degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub coord: Vec<i64>,
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl Placement {
    pub fn generate(w: &WeightedGraph, seed: u64) -> Self {
        let mut state = seed ^ 0xD1B54A32D192ED03;
        let n = w.graph.num_half_edges();
        let mut coord = vec![0i64; n];
        let mut used: Vec<Vec<i64>> = vec![Vec::new(); w.graph.num_vertices()];
        for h in 0..n {
            let v = w.graph.half_edge_vertex(h);
            loop {
                let c = (splitmix(&mut state) % 41) as i64;
                if !used[v].contains(&c) {
                    used[v].push(c);
                    coord[h] = c;
                    break;
                }
            }
        }
        Placement { coord }
    }

    pub fn is_valid(&self, w: &WeightedGraph) -> bool {
        if self.coord.len() != w.graph.num_half_edges() {
            return false;
        }
        for v in 0..w.graph.num_vertices() {
            let coords: Vec<i64> = (0..w.graph.num_half_edges())
                .filter(|&h| w.graph.half_edge_vertex(h) == v)
                .map(|h| self.coord[h])
                .collect();
            let mut sorted = coords.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != coords.len() {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// Exact rank over a large prime field, used as a cross-check of the
/// fraction-free rational rank.
fn rank_mod_p(rows: &[Vec<BigInt>]) -> usize {
    const P: u128 = 2305843009213693951; // 2^61 - 1
    let reduce = |x: &BigInt| -> u128 {
        let m = BigInt::from(P);
        let r = ((x % &m) + &m) % &m;
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0) as u128
    };
    let pow = |mut b: u128, mut e: u128| -> u128 {
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        acc
    };
    let mut m: Vec<Vec<u128>> = rows
        .iter()
        .map(|r| r.iter().map(reduce).collect())
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for j in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| m[i][j] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = pow(m[rank][j], P - 2);
        for i in rank + 1..nrows {
            if m[i][j] == 0 {
                continue;
            }
            let f = m[i][j] * inv % P;
            for k in j..ncols {
                let sub = f * m[rank][k] % P;
                m[i][k] = (m[i][k] + P - sub) % P;
            }
        }
        rank += 1;
    }
    rank
}

/// Exact dimension of the space of glued sections over one piece, plus its
/// parity. Sections on a rational component of spin degree d are modeled as
/// polynomials of degree at most d evaluated at the branch coordinates, and
/// each even-contact node imposes value(branch 1) = sign * value(branch 2).
pub fn h0_parity(
    w: &WeightedGraph,
    pieces: &RationalPieces,
    degrees: &SpinDegrees,
    signs: &GluingSigns,
    placement: &Placement,
) -> Result<(u64, Parity), SpinError> {
    for (v, vert) in w.graph.vertices().iter().enumerate() {
        if vert.genus != 0 {
            return Err(SpinError::UnsupportedRegime {
                vertex: v,
                genus: vert.genus,
            });
        }
    }
    signs.check(w)?;
    assert!(placement.is_valid(w), "branch coordinates must be distinct per vertex");

    let mut h0_total: u64 = 0;
    for piece in &pieces.pieces {
        // degree of the spin bundle on each component of the piece: the sum
        // of its divisor coefficients (floors already applied at odd cuts)
        let mut offset: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut n = 0usize;
        for &v in &piece.vertices {
            let d = degrees.degree[v];
            let dim = if d >= 0 { (d + 1) as usize } else { 0 };
            offset.insert(v, (n, dim));
            n += dim;
        }
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for &e in &piece.edges {
            let s = BigInt::from(signs.0[&e]);
            let (h0, h1) = (2 * e, 2 * e + 1);
            let (v0, v1) = (w.graph.half_edge_vertex(h0), w.graph.half_edge_vertex(h1));
            let mut row = vec![BigInt::zero(); n];
            let (off0, dim0) = offset[&v0];
            let mut x = BigInt::from(1);
            for k in 0..dim0 {
                row[off0 + k] += &x;
                x *= BigInt::from(placement.coord[h0]);
            }
            let (off1, dim1) = offset[&v1];
            let mut y = BigInt::from(1);
            for k in 0..dim1 {
                row[off1 + k] -= &s * &y;
                y *= BigInt::from(placement.coord[h1]);
            }
            rows.push(row);
        }
        let rank = if rows.is_empty() || n == 0 {
            0
        } else {
            let m = IntMatrix::from_bigint_rows(&rows, n);
            let exact = m.rank();
            let modular = rank_mod_p(&rows);
            assert_eq!(exact, modular, "modular rank cross-check failed");
            exact
        };
        h0_total += (n - rank) as u64;
    }
    let parity = if h0_total % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    };
    Ok((h0_total, parity))
}

/// Full report of the parity pipeline.
#[derive(Clone, Debug)]
pub struct SpinReport {
    pub h0: u64,
    pub parity: Parity,
    pub degrees: SpinDegrees,
    pub lift: OrbifoldLift,
    pub refinement_index: BigInt,
    pub pieces: RationalPieces,
}

/// The parity pipeline: even-signature check, orbifold lift, divisibility
/// base change, spin degrees, partial normalization at odd edges, and the
/// exact section count on each piece. Only all-rational graphs are
/// supported; anything else is an explicit unsupported-regime error rather
/// than a wrong answer.
pub fn spin_parity_seeded(input: &SpinInput, seed: u64) -> Result<SpinReport, SpinError> {
    let w = &input.weighted;
    w.graph.validate(&w.signature)?;
    if !check_even_signature(&w.signature) {
        return Err(SpinError::OddSignature);
    }
    for (v, vert) in w.graph.vertices().iter().enumerate() {
        if vert.genus != 0 {
            return Err(SpinError::UnsupportedRegime {
                vertex: v,
                genus: vert.genus,
            });
        }
    }
    input.signs.check(w)?;
    let lift = orbifold_lift_map(w);
    let (_refined, refinement_index) = divisibility_base_change(w);
    let degrees = spin_degrees(w)?;
    let pieces = split_at_odd_edges(w);
    let placement = Placement::generate(w, seed);
    let (h0, parity) = h0_parity(w, &pieces, &degrees, &input.signs, &placement)?;
    Ok(SpinReport {
        h0,
        parity,
        degrees,
        lift,
        refinement_index,
        pieces,
    })
}

pub fn spin_parity(input: &SpinInput) -> Result<SpinReport, SpinError> {
    spin_parity_seeded(input, 0)
}
