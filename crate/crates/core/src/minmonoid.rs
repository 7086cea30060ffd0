//! The minimal monoid of a weighted graph.
//!
//! Starting from the free abelian group on the degeneracy symbols e_v and the
//! smoothing symbols e_l, the construction imposes e_v = 0 at nondegenerate
//! vertices and e_src + c_l * e_l = e_dst along every oriented edge, passes
//! to the maximal torsion-free quotient, and saturates the submonoid
//! generated by the symbol images. The quotient coordinates are pinned by
//! Hermite normal form, so equal inputs give identical output.
//!
//! For a graph with an involution the invariant monoid is built in two
//! independent ways: as the group quotient identifying each swapped edge pair
//! (`hyperelliptic_monoid_quotient`) and as the coequalizer of the induced
//! symbol permutation with the identity (`hyperelliptic_monoid_coequalizer`).
//! Neither delegates to the other; `monoids_equal` turns their agreement into
//! an executable check.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::hyper;
use crate::intlat::{
    saturate, snf_full, solve_linear, torsion_free_quotient, vec_is_zero, AffineMonoid, IntMatrix,
    Lattice,
};
use crate::stablegraph::{check_involution, GraphInvolution};
use crate::twist::WeightedGraph;

/// A degeneracy or smoothing symbol of a weighted graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MSymbol {
    Vertex(usize),
    Edge(usize),
}

impl fmt::Display for MSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MSymbol::Vertex(v) => write!(f, "v{v}"),
            MSymbol::Edge(e) => write!(f, "e{e}"),
        }
    }
}

/// A saturated sharp model of the base monoid of a weighted graph, together
/// with the images of all degeneracy and smoothing symbols. The ambient
/// lattice is the full torsion-free quotient group, so the group generated by
/// the monoid is the ambient lattice itself.
#[derive(Clone, Debug)]
pub struct MinimalMonoid {
    pub monoid: AffineMonoid,
    pub images: BTreeMap<MSymbol, Vec<BigInt>>,
}

impl MinimalMonoid {
    pub fn ambient_rank(&self) -> usize {
        self.monoid.ambient().rank()
    }

    pub fn image(&self, s: MSymbol) -> &[BigInt] {
        &self.images[&s]
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error("involution is not structure-preserving")]
    InvalidInvolution,
    #[error("involution is incompatible with the twisted structure")]
    IncompatibleInvolution,
    #[error("quotient monoid violates the expected invariance: {0}")]
    PropertyViolation(String),
}

fn symbols(w: &WeightedGraph) -> Vec<MSymbol> {
    let nv = w.graph.num_vertices();
    let ne = w.graph.num_edges();
    (0..nv)
        .map(MSymbol::Vertex)
        .chain((0..ne).map(MSymbol::Edge))
        .collect()
}

fn symbol_index(w: &WeightedGraph, s: MSymbol) -> usize {
    match s {
        MSymbol::Vertex(v) => v,
        MSymbol::Edge(e) => w.graph.num_vertices() + e,
    }
}

/// Relation rows in the free group on the symbols: nondegeneracy rows e_v for
/// flagged-nondegenerate vertices, and e_src + c_l e_l - e_dst (identifying
/// endpoints when the edge is unoriented) for every edge.
fn relation_rows(w: &WeightedGraph) -> Vec<Vec<BigInt>> {
    let nv = w.graph.num_vertices();
    let ne = w.graph.num_edges();
    let n = nv + ne;
    let mut rows = Vec::new();
    for v in 0..nv {
        if !w.structure.degenerate[v] {
            let mut row = vec![BigInt::zero(); n];
            row[v] = BigInt::one();
            rows.push(row);
        }
    }
    for e in 0..ne {
        let mut row = vec![BigInt::zero(); n];
        match w.structure.source(&w.graph, e) {
            Some(src) => {
                let dst = w.structure.target(&w.graph, e).expect("oriented edge has target");
                row[src] += BigInt::one();
                row[nv + e] += BigInt::from(w.structure.contact[e]);
                row[dst] -= BigInt::one();
            }
            None => {
                let [a, b] = w.graph.edges()[e].halves;
                row[a] += BigInt::one();
                row[b] -= BigInt::one();
            }
        }
        if !vec_is_zero(&row) {
            rows.push(row);
        }
    }
    rows
}

/// The minimal monoid of a weighted graph. Total: inconsistent structures
/// simply yield monoids whose images fail the consistency conditions.
pub fn minimal_monoid(w: &WeightedGraph) -> MinimalMonoid {
    let n = w.graph.num_vertices() + w.graph.num_edges();
    let rows = relation_rows(w);
    let rel = IntMatrix::from_bigint_rows(&rows, n);
    let (lattice, proj) = torsion_free_quotient(n, &rel);
    let images: BTreeMap<MSymbol, Vec<BigInt>> = symbols(w)
        .into_iter()
        .map(|s| (s, proj.col_to_vec(symbol_index(w, s))))
        .collect();
    let gens: Vec<Vec<BigInt>> = images.values().cloned().collect();
    let monoid = saturate(&gens, &lattice).expect("images lie in the quotient lattice");
    MinimalMonoid { monoid, images }
}

fn validate_involution(w: &WeightedGraph, inv: &GraphInvolution) -> Result<(), MonoidError> {
    if !check_involution(&w.graph, inv) {
        return Err(MonoidError::InvalidInvolution);
    }
    if !hyper::check_involution_compat(w, inv) {
        return Err(MonoidError::IncompatibleInvolution);
    }
    Ok(())
}

/// Quotients the base monoid by fresh relations (rows in its ambient
/// lattice), re-saturating the symbol images in the new torsion-free group.
fn quotient_by_rows(base: &MinimalMonoid, rows: Vec<Vec<BigInt>>) -> MinimalMonoid {
    let r = base.ambient_rank();
    let rel = IntMatrix::from_bigint_rows(&rows, r);
    let (lattice, proj) = torsion_free_quotient(r, &rel);
    let images: BTreeMap<MSymbol, Vec<BigInt>> = base
        .images
        .iter()
        .map(|(s, v)| (*s, proj.mul_vec(v)))
        .collect();
    let gens: Vec<Vec<BigInt>> = images.values().cloned().collect();
    let monoid = saturate(&gens, &lattice).expect("images lie in the quotient lattice");
    MinimalMonoid { monoid, images }
}

/// Checks the two properties the invariant monoid must satisfy whenever the
/// base images are nontrivial where they should be: symbols stay nontrivial
/// (degenerate vertices and all edges), and images are constant on
/// involution orbits.
fn check_quotient_properties(
    w: &WeightedGraph,
    inv: &GraphInvolution,
    base: &MinimalMonoid,
    result: &MinimalMonoid,
) -> Result<(), MonoidError> {
    for v in 0..w.graph.num_vertices() {
        let (a, b) = (MSymbol::Vertex(v), MSymbol::Vertex(inv.vertex_map[v]));
        if result.images[&a] != result.images[&b] {
            return Err(MonoidError::PropertyViolation(format!(
                "image of {a} differs from image of {b}"
            )));
        }
    }
    for e in 0..w.graph.num_edges() {
        let (a, b) = (MSymbol::Edge(e), MSymbol::Edge(inv.edge_map(e)));
        if result.images[&a] != result.images[&b] {
            return Err(MonoidError::PropertyViolation(format!(
                "image of {a} differs from image of {b}"
            )));
        }
    }
    // nontriviality transfers from the base monoid
    for (s, img) in &base.images {
        let relevant = match s {
            MSymbol::Vertex(v) => w.structure.degenerate[*v],
            MSymbol::Edge(_) => true,
        };
        if relevant && !vec_is_zero(img) && vec_is_zero(&result.images[s]) {
            return Err(MonoidError::PropertyViolation(format!(
                "nontrivial symbol {s} collapses in the invariant monoid"
            )));
        }
    }
    Ok(())
}

/// Invariant monoid, first presentation: torsion-free part of the quotient of
/// the base group by e_l = e_{iota(l)} over all swapped edge pairs, with the
/// saturation of the image monoid.
pub fn hyperelliptic_monoid_quotient(
    w: &WeightedGraph,
    inv: &GraphInvolution,
) -> Result<MinimalMonoid, MonoidError> {
    validate_involution(w, inv)?;
    let base = minimal_monoid(w);
    let split = hyper::edge_orbit_split(&w.graph, inv);
    let rows: Vec<Vec<BigInt>> = split
        .swapped
        .iter()
        .map(|&(l, l2)| {
            let a = &base.images[&MSymbol::Edge(l)];
            let b = &base.images[&MSymbol::Edge(l2)];
            a.iter().zip(b).map(|(x, y)| x - y).collect()
        })
        .collect();
    let result = quotient_by_rows(&base, rows);
    check_quotient_properties(w, inv, &base, &result)?;
    Ok(result)
}

/// Invariant monoid, second presentation: coequalizer of the symbol
/// permutation with the identity, computed as the group quotient by all
/// differences x - phi(x), torsion-free part, then saturation of the image.
pub fn hyperelliptic_monoid_coequalizer(
    w: &WeightedGraph,
    inv: &GraphInvolution,
) -> Result<MinimalMonoid, MonoidError> {
    validate_involution(w, inv)?;
    let base = minimal_monoid(w);
    let mut rows = Vec::new();
    for v in 0..w.graph.num_vertices() {
        let a = &base.images[&MSymbol::Vertex(v)];
        let b = &base.images[&MSymbol::Vertex(inv.vertex_map[v])];
        let row: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        if !vec_is_zero(&row) {
            rows.push(row);
        }
    }
    for e in 0..w.graph.num_edges() {
        let a = &base.images[&MSymbol::Edge(e)];
        let b = &base.images[&MSymbol::Edge(inv.edge_map(e))];
        let row: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        if !vec_is_zero(&row) {
            rows.push(row);
        }
    }
    let result = quotient_by_rows(&base, rows);
    check_quotient_properties(w, inv, &base, &result)?;
    Ok(result)
}

/// Solves X * A = B over the integers for X, where A is (ra x n) of full row
/// rank and B is (rb x n). Returns None when no integer solution exists.
fn solve_left_factor(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let at = a.transpose();
    let f = snf_full(&at);
    let mut rows = Vec::with_capacity(b.rows());
    for i in 0..b.rows() {
        let x = solve_linear(&f, &b.row_to_vec(i))?;
        rows.push(x);
    }
    Some(IntMatrix::from_bigint_rows(&rows, a.rows()))
}

/// Do two monoids over the same symbol set agree? True exactly when the
/// correspondence e_v -> e_v, e_l -> e_l extends to mutually inverse lattice
/// isomorphisms identifying the two Hilbert bases.
pub fn monoids_equal(a: &MinimalMonoid, b: &MinimalMonoid) -> bool {
    if a.images.keys().ne(b.images.keys()) {
        return false;
    }
    let n = a.images.len();
    let ma = IntMatrix::from_fn(a.ambient_rank(), n, |i, j| {
        a.images.values().nth(j).unwrap()[i].clone()
    });
    let mb = IntMatrix::from_fn(b.ambient_rank(), n, |i, j| {
        b.images.values().nth(j).unwrap()[i].clone()
    });
    let Some(fwd) = solve_left_factor(&ma, &mb) else {
        return false;
    };
    let Some(bwd) = solve_left_factor(&mb, &ma) else {
        return false;
    };
    if !fwd.mul(&bwd).is_identity() || !bwd.mul(&fwd).is_identity() {
        return false;
    }
    let mapped: std::collections::BTreeSet<Vec<BigInt>> = a
        .monoid
        .hilbert_basis()
        .iter()
        .map(|h| fwd.mul_vec(h))
        .collect();
    let target: std::collections::BTreeSet<Vec<BigInt>> =
        b.monoid.hilbert_basis().iter().cloned().collect();
    mapped == target
}

/// Element to halve: a named symbol or an explicit ambient vector.
#[derive(Clone, Debug)]
pub enum Elem {
    Sym(MSymbol),
    Vec(Vec<BigInt>),
}

/// Returns y with 2y = x and y in the monoid, when such y exists.
pub fn halve(m: &MinimalMonoid, x: &Elem) -> Option<Vec<BigInt>> {
    let v: Vec<BigInt> = match x {
        Elem::Sym(s) => m.images.get(s).expect("unknown symbol").clone(),
        Elem::Vec(v) => v.clone(),
    };
    let two = BigInt::from(2);
    if v.iter().any(|c| !(c % &two).is_zero()) {
        return None;
    }
    let y: Vec<BigInt> = v.iter().map(|c| c / &two).collect();
    match m.monoid.contains(&y) {
        Ok(true) => Some(y),
        _ => None,
    }
}

/// Smallest 2-power-index lattice refinement making every target symbol's
/// image divisible by 2 in the re-saturated monoid. Adjoins half-vectors one
/// target at a time; the returned index is the product of the per-step
/// indices. Refining an already refined monoid for the same targets gives
/// index 1.
pub fn refine_for_halving(
    m: &MinimalMonoid,
    targets: &[MSymbol],
) -> (MinimalMonoid, BigInt) {
    let r = m.ambient_rank();
    let mut images = m.images.clone();
    let mut index = BigInt::one();
    let two = BigInt::from(2);
    let mut sorted_targets: Vec<MSymbol> = targets.to_vec();
    sorted_targets.sort();
    sorted_targets.dedup();

    'scan: loop {
        for s in &sorted_targets {
            let v = images.get(s).expect("unknown target symbol").clone();
            if v.iter().all(|c| (c % &two).is_zero()) {
                continue;
            }
            // adjoin v/2: the new lattice is half of the lattice generated by
            // 2 Z^r and v; re-express every image in its canonical basis
            let gen_mat = IntMatrix::from_fn(r, r + 1, |i, j| {
                if j < r {
                    if i == j {
                        two.clone()
                    } else {
                        BigInt::zero()
                    }
                } else {
                    v[i].clone()
                }
            });
            let basis = crate::intlat::col_lattice_basis(&gen_mat);
            let det = basis.det().abs();
            let step = BigInt::from(2).pow(r as u32) / &det;
            debug_assert!(step > BigInt::one());
            index *= step;
            let f = snf_full(&basis);
            for img in images.values_mut() {
                let doubled: Vec<BigInt> = img.iter().map(|c| c * &two).collect();
                *img = solve_linear(&f, &doubled).expect("old lattice sits inside refinement");
            }
            continue 'scan;
        }
        break;
    }

    let gens: Vec<Vec<BigInt>> = images.values().cloned().collect();
    let monoid = saturate(&gens, &Lattice::standard(r)).expect("standard ambient");
    (MinimalMonoid { monoid, images }, index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlat::smith_normal_form;
    use crate::testutil::*;
    use crate::twist::{EdgeOrientation, TwistedStructure};
    use crate::Signature;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn hb_i64(m: &MinimalMonoid) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        m.monoid
            .hilbert_basis()
            .iter()
            .map(|row| row.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect()
    }

    #[test]
    fn worked_example_monoid_is_n() {
        let m = minimal_monoid(&worked_example());
        assert_eq!(m.ambient_rank(), 1);
        assert_eq!(hb_i64(&m), vec![vec![1]]);
        assert_eq!(m.images[&MSymbol::Vertex(0)], bi(&[0]));
        assert_eq!(m.images[&MSymbol::Vertex(1)], bi(&[2]));
        assert_eq!(m.images[&MSymbol::Edge(0)], bi(&[1]));
        assert_eq!(m.images[&MSymbol::Edge(1)], bi(&[1]));
    }

    #[test]
    fn smooth_vertex_monoid_is_zero() {
        let w = WeightedGraph {
            graph: single_vertex(2, 1),
            signature: Signature(vec![2]),
            structure: TwistedStructure {
                contact: vec![],
                orientation: vec![],
                degenerate: vec![false],
            },
        };
        let m = minimal_monoid(&w);
        assert_eq!(m.ambient_rank(), 0);
        assert!(m.monoid.is_zero());
        assert_eq!(m.images[&MSymbol::Vertex(0)], bi(&[]));
    }

    #[test]
    fn chain_monoid_is_n() {
        let m = minimal_monoid(&chain_two());
        assert_eq!(m.ambient_rank(), 1);
        assert_eq!(hb_i64(&m), vec![vec![1]]);
        assert_eq!(m.images[&MSymbol::Edge(0)], bi(&[1]));
        assert_eq!(m.images[&MSymbol::Vertex(1)], bi(&[1]));
        assert_eq!(m.images[&MSymbol::Vertex(0)], bi(&[0]));
    }

    #[test]
    fn group_generated_equals_ambient() {
        for w in [worked_example(), chain_two(), genus_one_banana_weighted()] {
            let m = minimal_monoid(&w);
            let n = m.images.len();
            let mat = IntMatrix::from_fn(m.ambient_rank(), n, |i, j| {
                m.images.values().nth(j).unwrap()[i].clone()
            });
            // the images must generate the full ambient lattice as a group
            let (_, s, _) = smith_normal_form(&mat);
            let diag: Vec<BigInt> =
                (0..m.ambient_rank()).map(|i| s.get(i, i).clone()).collect();
            assert!(diag.iter().all(|d| d == &BigInt::one()));
            // and every edge relation holds exactly
            for e in 0..w.graph.num_edges() {
                if let Some(src) = w.structure.source(&w.graph, e) {
                    let dst = w.structure.target(&w.graph, e).unwrap();
                    let c = BigInt::from(w.structure.contact[e]);
                    let lhs: Vec<BigInt> = m.images[&MSymbol::Vertex(src)]
                        .iter()
                        .zip(&m.images[&MSymbol::Edge(e)])
                        .map(|(a, b)| a + &c * b)
                        .collect();
                    assert_eq!(lhs, m.images[&MSymbol::Vertex(dst)]);
                }
            }
        }
    }

    fn edge_swap_involution() -> GraphInvolution {
        GraphInvolution {
            vertex_map: vec![0, 1],
            half_edge_map: vec![2, 3, 0, 1],
            leg_map: vec![0],
        }
    }

    #[test]
    fn quotient_on_worked_example_is_unchanged() {
        let w = worked_example();
        let q = hyperelliptic_monoid_quotient(&w, &edge_swap_involution()).unwrap();
        assert_eq!(q.ambient_rank(), 1);
        assert_eq!(hb_i64(&q), vec![vec![1]]);
        assert_eq!(q.images[&MSymbol::Edge(0)], bi(&[1]));
        assert_eq!(q.images[&MSymbol::Edge(1)], bi(&[1]));
        assert_eq!(q.images[&MSymbol::Vertex(1)], bi(&[2]));
    }

    #[test]
    fn identity_involution_changes_nothing() {
        let w = worked_example();
        let id = GraphInvolution::identity(&w.graph);
        let base = minimal_monoid(&w);
        let q = hyperelliptic_monoid_quotient(&w, &id).unwrap();
        let c = hyperelliptic_monoid_coequalizer(&w, &id).unwrap();
        assert!(monoids_equal(&base, &q));
        assert!(monoids_equal(&base, &c));
    }

    /// two swapped parallel edges with c = 1: quotient identifies the edge
    /// generators; the invariant monoid is N
    fn two_swapped_edges() -> (WeightedGraph, GraphInvolution) {
        use crate::stablegraph::{Edge, StableGraph, Vertex};
        let graph = StableGraph::new(
            vec![Vertex { genus: 0 }, Vertex { genus: 0 }],
            vec![],
            vec![Edge { halves: [0, 1] }, Edge { halves: [0, 1] }],
        )
        .unwrap();
        let w = WeightedGraph {
            graph,
            signature: Signature(vec![]),
            structure: TwistedStructure {
                contact: vec![1, 1],
                orientation: vec![EdgeOrientation::Forward, EdgeOrientation::Forward],
                degenerate: vec![false, true],
            },
        };
        let inv = GraphInvolution {
            vertex_map: vec![0, 1],
            half_edge_map: vec![2, 3, 0, 1],
            leg_map: vec![],
        };
        (w, inv)
    }

    #[test]
    fn swapped_edges_quotient_to_n() {
        let (w, inv) = two_swapped_edges();
        let q = hyperelliptic_monoid_quotient(&w, &inv).unwrap();
        assert_eq!(q.ambient_rank(), 1);
        assert_eq!(hb_i64(&q), vec![vec![1]]);
        assert_eq!(q.images[&MSymbol::Edge(0)], bi(&[1]));
        assert_eq!(q.images[&MSymbol::Edge(1)], bi(&[1]));
        assert_eq!(q.images[&MSymbol::Vertex(1)], bi(&[1]));

        let c = hyperelliptic_monoid_coequalizer(&w, &inv).unwrap();
        assert!(monoids_equal(&q, &c));
    }

    #[test]
    fn coequalizer_on_worked_example() {
        let w = worked_example();
        let c = hyperelliptic_monoid_coequalizer(&w, &edge_swap_involution()).unwrap();
        assert_eq!(c.ambient_rank(), 1);
        assert_eq!(hb_i64(&c), vec![vec![1]]);
        let q = hyperelliptic_monoid_quotient(&w, &edge_swap_involution()).unwrap();
        assert!(monoids_equal(&q, &c));
    }

    #[test]
    fn incompatible_involution_is_rejected() {
        let mut w = worked_example();
        w.structure = banana_structure(1, 3);
        // swapping edges of different contact orders violates compatibility
        assert_eq!(
            hyperelliptic_monoid_quotient(&w, &edge_swap_involution()).unwrap_err(),
            MonoidError::IncompatibleInvolution
        );
    }

    #[test]
    fn unequal_monoids_detected() {
        let a = minimal_monoid(&worked_example());
        // same symbols, incompatible images in a rank-2 lattice
        let mut images = a.images.clone();
        for (i, v) in images.values_mut().enumerate() {
            *v = bi(&[1 + i as i64, i as i64]);
        }
        let gens: Vec<Vec<BigInt>> = images.values().cloned().collect();
        let monoid = saturate(&gens, &Lattice::standard(2)).unwrap();
        let b = MinimalMonoid { monoid, images };
        assert!(!monoids_equal(&a, &b));
        assert!(monoids_equal(&a, &a));
    }

    #[test]
    fn halving() {
        let m = minimal_monoid(&worked_example());
        assert_eq!(halve(&m, &Elem::Sym(MSymbol::Vertex(1))), Some(bi(&[1])));
        assert_eq!(halve(&m, &Elem::Sym(MSymbol::Edge(0))), None);
        assert_eq!(halve(&m, &Elem::Vec(bi(&[0]))), Some(bi(&[0])));
    }

    #[test]
    fn refinement_indices() {
        let m = minimal_monoid(&worked_example());
        let (r1, idx1) = refine_for_halving(&m, &[MSymbol::Vertex(1)]);
        assert_eq!(idx1, BigInt::one());
        assert!(monoids_equal(&m, &r1));

        let chain = minimal_monoid(&chain_two());
        let (r2, idx2) = refine_for_halving(&chain, &[MSymbol::Vertex(1)]);
        assert_eq!(idx2, BigInt::from(2));
        assert_eq!(r2.images[&MSymbol::Vertex(1)], bi(&[2]));
        assert!(halve(&r2, &Elem::Sym(MSymbol::Vertex(1))).is_some());

        let (_, idx3) = refine_for_halving(&m, &[]);
        assert_eq!(idx3, BigInt::one());

        // idempotence
        let (_, idx4) = refine_for_halving(&r2, &[MSymbol::Vertex(1)]);
        assert_eq!(idx4, BigInt::one());
    }
}
