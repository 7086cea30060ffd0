use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use super::{vec_dot, vec_is_zero, vec_neg, vec_primitive, vec_sub, IntLatError, Lattice};

/// A fine, saturated monoid inside an explicit ambient lattice, presented by
/// its Hilbert basis.
///
/// Construction always goes through [`saturate`], which replaces the
/// generated monoid by its saturation in the ambient group. For a sharp
/// monoid (pointed cone) the stored basis is the unique minimal generating
/// set; for a non-sharp monoid it is a canonical generating set containing
/// opposite pairs along the lineality space.
#[derive(Clone, Debug)]
pub struct AffineMonoid {
    ambient: Lattice,
    generators: Vec<Vec<BigInt>>,
    labels: Option<Vec<String>>,
    hilbert_basis: Vec<Vec<BigInt>>,
    sharp: bool,
    /// saturated sublattice of the ambient spanned by the generators,
    /// in ambient-internal coordinates
    span: Lattice,
    /// facet normals of the generated cone, in span coordinates
    facets: Vec<Vec<BigInt>>,
}

impl AffineMonoid {
    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    /// The generators the monoid was built from, deduplicated and sorted.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    /// Minimal generating set of the saturation, lexicographically sorted.
    pub fn hilbert_basis(&self) -> &[Vec<BigInt>] {
        &self.hilbert_basis
    }

    /// True when the generated rational cone is pointed (contains no line);
    /// equivalently, when 0 is the only unit of the monoid.
    pub fn is_sharp(&self) -> bool {
        self.sharp
    }

    pub fn is_zero(&self) -> bool {
        self.hilbert_basis.is_empty()
    }

    /// Membership: is `x` a nonnegative integer combination of the Hilbert
    /// basis? Rejects vectors of the wrong dimension.
    pub fn contains(&self, x: &[BigInt]) -> Result<bool, IntLatError> {
        if x.len() != self.ambient.coord_dim() {
            return Err(IntLatError::DimensionMismatch {
                expected: self.ambient.coord_dim(),
                got: x.len(),
            });
        }
        let Some(y) = self.ambient.coords_of(x)? else {
            return Ok(false);
        };
        let Some(z) = self.span.coords_of(&y)? else {
            return Ok(false);
        };
        Ok(self.facets.iter().all(|a| !vec_dot(a, &z).is_negative()))
    }
}

/// Saturation of the monoid generated by `generators` inside the ambient
/// lattice: all x in the ambient group with n·x in the generated monoid for
/// some n >= 1, computed as cone intersect lattice.
///
/// The result is independent of generator order and duplication. Generators
/// must lie in the ambient lattice.
pub fn saturate(generators: &[Vec<BigInt>], ambient: &Lattice) -> Result<AffineMonoid, IntLatError> {
    let r = ambient.rank();
    let mut gens_sorted: Vec<Vec<BigInt>> = generators.to_vec();
    gens_sorted.sort();
    gens_sorted.dedup();

    let mut gens_ambient: Vec<Vec<BigInt>> = Vec::new();
    for g in &gens_sorted {
        match ambient.coords_of(g)? {
            Some(y) => gens_ambient.push(y),
            None => return Err(IntLatError::OutsideLattice),
        }
    }
    gens_ambient.retain(|y| !vec_is_zero(y));

    if gens_ambient.is_empty() {
        return Ok(AffineMonoid {
            ambient: ambient.clone(),
            generators: gens_sorted,
            labels: None,
            hilbert_basis: Vec::new(),
            sharp: true,
            span: Lattice::from_basis(IntMatrix::zeros(r, 0))?,
            facets: Vec::new(),
        });
    }

    // saturated sublattice spanned by the generators
    let gmat = IntMatrix::from_fn(r, gens_ambient.len(), |i, j| gens_ambient[j][i].clone());
    let f = super::snf_full(&gmat);
    let d = f.rank();
    let span_basis = IntMatrix::from_fn(r, d, |i, j| f.uinv.get(i, j).clone());
    let span = Lattice::from_basis(span_basis)?;

    let gens_z: Vec<Vec<BigInt>> = gens_ambient
        .iter()
        .map(|y| span.coords_of(y).unwrap().expect("generator lies in its own span"))
        .collect();

    let facets = cone_facets(&gens_z, d);
    let facet_mat = IntMatrix::from_fn(facets.len(), d, |i, j| facets[i][j].clone());
    let sharp = facet_mat.rank() == d;

    let hb_z = if sharp {
        hilbert_basis_pointed(&gens_z, &facets, d)
    } else {
        hilbert_basis_with_lineality(&gens_z, &facets, d)
    };

    let mut hb: Vec<Vec<BigInt>> = hb_z
        .iter()
        .map(|z| ambient.embed(&span.embed(z)))
        .collect();
    hb.sort();

    Ok(AffineMonoid {
        ambient: ambient.clone(),
        generators: gens_sorted,
        labels: None,
        hilbert_basis: hb,
        sharp,
        span,
        facets,
    })
}

/// H-description of cone(gens) in Z^d by Fourier-Motzkin elimination of the
/// combination variables, followed by a facet filter. Returns primitive facet
/// normals, sorted; empty when the cone is all of R^d.
fn cone_facets(gens: &[Vec<BigInt>], d: usize) -> Vec<Vec<BigInt>> {
    let k = gens.len();
    if d == 0 {
        return Vec::new();
    }
    // variables: x_0..x_{d-1}, l_0..l_{k-1}; rows mean row . vars >= 0
    let width = d + k;
    let mut rows: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for j in 0..d {
        let mut pos = vec![BigInt::zero(); width];
        pos[j] = BigInt::from(1);
        for (i, g) in gens.iter().enumerate() {
            pos[d + i] = -&g[j];
        }
        let neg = vec_neg(&pos);
        rows.insert(pos);
        rows.insert(neg);
    }
    for i in 0..k {
        let mut row = vec![BigInt::zero(); width];
        row[d + i] = BigInt::from(1);
        rows.insert(row);
    }

    for var in d..width {
        let mut zero_rows: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        let mut pos_rows: Vec<Vec<BigInt>> = Vec::new();
        let mut neg_rows: Vec<Vec<BigInt>> = Vec::new();
        for row in rows {
            match row[var].sign() {
                num_bigint::Sign::NoSign => {
                    zero_rows.insert(row);
                }
                num_bigint::Sign::Plus => pos_rows.push(row),
                num_bigint::Sign::Minus => neg_rows.push(row),
            }
        }
        for p in &pos_rows {
            for n in &neg_rows {
                // (-n[var]) * p + p[var] * n cancels the variable
                let a = -&n[var];
                let b = p[var].clone();
                let mut combo: Vec<BigInt> =
                    p.iter().zip(n).map(|(x, y)| &a * x + &b * y).collect();
                debug_assert!(combo[var].is_zero());
                if combo.iter().all(Zero::is_zero) {
                    continue;
                }
                vec_primitive(&mut combo);
                zero_rows.insert(combo);
            }
        }
        rows = zero_rows;
    }

    // keep the facets: valid inequalities whose contact set spans a hyperplane
    let mut facets: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for row in rows {
        let mut a: Vec<BigInt> = row[0..d].to_vec();
        if vec_is_zero(&a) {
            continue;
        }
        vec_primitive(&mut a);
        debug_assert!(gens.iter().all(|g| !vec_dot(&a, g).is_negative()));
        let touching: Vec<Vec<BigInt>> = gens
            .iter()
            .filter(|g| vec_dot(&a, g).is_zero())
            .cloned()
            .collect();
        let tmat = IntMatrix::from_fn(touching.len(), d, |i, j| touching[i][j].clone());
        if tmat.rank() + 1 == d {
            facets.insert(a);
        }
    }
    facets.into_iter().collect()
}

/// Minimal nonnegative solutions of B u = 0 by the Contejean-Devie
/// completion procedure. `cols` are the columns of B.
fn completion_minimal_solutions(cols: &[Vec<BigInt>]) -> Vec<Vec<u32>> {
    let n = cols.len();
    let m = cols.first().map_or(0, Vec::len);
    let mut basis: Vec<Vec<u32>> = Vec::new();
    let dominated = |v: &[u32], basis: &[Vec<u32>]| {
        basis
            .iter()
            .any(|b| b.iter().zip(v).all(|(x, y)| x <= y))
    };
    let mut frontier: BTreeMap<Vec<u32>, Vec<BigInt>> = BTreeMap::new();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for i in 0..n {
        let mut u = vec![0u32; n];
        u[i] = 1;
        seen.insert(u.clone());
        frontier.insert(u, cols[i].clone());
    }
    while !frontier.is_empty() {
        let mut next: BTreeMap<Vec<u32>, Vec<BigInt>> = BTreeMap::new();
        for (u, bu) in frontier {
            if bu.iter().all(Zero::is_zero) {
                if !dominated(&u, &basis) {
                    basis.push(u);
                }
                continue;
            }
            if dominated(&u, &basis) {
                continue;
            }
            for i in 0..n {
                if vec_dot(&bu, &cols[i]).is_negative() {
                    let mut v = u.clone();
                    v[i] += 1;
                    if seen.contains(&v) || dominated(&v, &basis) {
                        continue;
                    }
                    seen.insert(v.clone());
                    let bv: Vec<BigInt> = bu.iter().zip(&cols[i]).map(|(x, y)| x + y).collect();
                    next.insert(v, bv);
                }
            }
        }
        frontier = next;
    }
    let _ = m;
    basis.sort();
    basis
}

/// Hilbert basis of the pointed cone {z : a.z >= 0 for all facets a}.
///
/// The cone membership problem is turned into a homogeneous system over
/// nonnegative variables (z = z+ - z- with slack variables for the facet
/// inequalities); the completion procedure lists its minimal solutions, whose
/// projections generate the monoid, and a minimality filter extracts the
/// irreducible elements.
fn hilbert_basis_pointed(gens: &[Vec<BigInt>], facets: &[Vec<BigInt>], d: usize) -> Vec<Vec<BigInt>> {
    let m = facets.len();
    debug_assert!(m > 0 || d == 0);
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(2 * d + m);
    for i in 0..d {
        cols.push(facets.iter().map(|a| a[i].clone()).collect());
    }
    for i in 0..d {
        cols.push(facets.iter().map(|a| -&a[i]).collect());
    }
    for j in 0..m {
        let mut c = vec![BigInt::zero(); m];
        c[j] = BigInt::from(-1);
        cols.push(c);
    }
    let solutions = completion_minimal_solutions(&cols);

    let mut candidates: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for u in solutions {
        let z: Vec<BigInt> = (0..d)
            .map(|i| BigInt::from(u[i]) - BigInt::from(u[d + i]))
            .collect();
        if !vec_is_zero(&z) {
            candidates.insert(z);
        }
    }
    let _ = gens;

    let in_cone =
        |w: &[BigInt]| facets.iter().all(|a| !vec_dot(a, w).is_negative());
    let all: Vec<Vec<BigInt>> = candidates.iter().cloned().collect();
    all.iter()
        .filter(|x| {
            !all.iter()
                .any(|y| y != *x && in_cone(&vec_sub(x, y)))
        })
        .cloned()
        .collect()
}

/// Generating set for a cone with positive-dimensional lineality space:
/// opposite pairs along a basis of the lineality lattice plus a lift of the
/// Hilbert basis of the pointed quotient.
fn hilbert_basis_with_lineality(
    gens: &[Vec<BigInt>],
    facets: &[Vec<BigInt>],
    d: usize,
) -> Vec<Vec<BigInt>> {
    let m = facets.len();
    let amat = IntMatrix::from_fn(m, d, |i, j| facets[i][j].clone());
    let f = super::snf_full(&amat);
    let q = f.rank();
    // kernel of A = lineality lattice, spanned by the trailing columns of V
    let lineality: Vec<Vec<BigInt>> = (q..d).map(|j| f.v.col_to_vec(j)).collect();
    debug_assert!(!lineality.is_empty());

    // quotient coordinates: first q entries of V^-1 x
    let proj = |x: &[BigInt]| -> Vec<BigInt> { f.vinv.mul_vec(x)[0..q].to_vec() };
    let lift = |zq: &[BigInt]| -> Vec<BigInt> {
        let mut z = zq.to_vec();
        z.resize(d, BigInt::zero());
        f.v.mul_vec(&z)
    };

    let mut result: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for l in &lineality {
        result.insert(l.clone());
        result.insert(vec_neg(l));
    }
    if q > 0 {
        let pgens: Vec<Vec<BigInt>> = gens.iter().map(|g| proj(g)).collect();
        let pfacets = cone_facets(&pgens, q);
        let pmat = IntMatrix::from_fn(pfacets.len(), q, |i, j| pfacets[i][j].clone());
        debug_assert_eq!(pmat.rank(), q, "quotient by lineality must be pointed");
        for h in hilbert_basis_pointed(&pgens, &pfacets, q) {
            result.insert(lift(&h));
        }
    }
    result.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn hb_i64(m: &AffineMonoid) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        m.hilbert_basis()
            .iter()
            .map(|row| row.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect()
    }

    #[test]
    fn saturates_to_unit_basis() {
        let ambient = Lattice::standard(2);
        let m = saturate(&[v(&[2, 0]), v(&[1, 1]), v(&[0, 2])], &ambient).unwrap();
        assert_eq!(hb_i64(&m), vec![vec![0, 1], vec![1, 0]]);
        assert!(m.is_sharp());
    }

    #[test]
    fn saturation_respects_ambient_sublattice() {
        // same generators, ambient restricted to even coordinate sums:
        // the monoid is already saturated there
        let ambient =
            Lattice::from_basis(IntMatrix::from_rows(&[vec![1, 1], vec![1, -1]])).unwrap();
        let m = saturate(&[v(&[2, 0]), v(&[1, 1]), v(&[0, 2])], &ambient).unwrap();
        assert_eq!(hb_i64(&m), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert!(m.is_sharp());
        assert!(m.contains(&v(&[3, 1])).unwrap());
        assert!(!m.contains(&v(&[1, 0])).unwrap());
    }

    #[test]
    fn empty_generators_give_zero_monoid() {
        let m = saturate(&[], &Lattice::standard(3)).unwrap();
        assert!(m.is_zero());
        assert!(m.is_sharp());
        assert!(m.contains(&v(&[0, 0, 0])).unwrap());
        assert!(!m.contains(&v(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn line_is_not_sharp() {
        let m = saturate(&[v(&[1]), v(&[-1])], &Lattice::standard(1)).unwrap();
        assert!(!m.is_sharp());
        assert_eq!(hb_i64(&m), vec![vec![-1], vec![1]]);
        assert!(m.contains(&v(&[-7])).unwrap());
    }

    #[test]
    fn membership_in_plane_quadrant() {
        let m = saturate(&[v(&[1, 0]), v(&[0, 1])], &Lattice::standard(2)).unwrap();
        assert!(m.contains(&v(&[3, 5])).unwrap());
        assert!(!m.contains(&v(&[-1, 0])).unwrap());
        assert_eq!(
            m.contains(&v(&[1])),
            Err(IntLatError::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn nontrivial_hilbert_basis() {
        // cone over (1,0) and (1,3): the basis needs the interior points
        let m = saturate(&[v(&[1, 0]), v(&[1, 3])], &Lattice::standard(2)).unwrap();
        let hb = hb_i64(&m);
        assert!(hb.contains(&vec![1, 1]));
        assert!(hb.contains(&vec![1, 2]));
        assert_eq!(hb.len(), 4);
    }

    #[test]
    fn lower_dimensional_cone_saturates_in_span() {
        // single generator (2, 4): saturation contains (1, 2)
        let m = saturate(&[v(&[2, 4])], &Lattice::standard(2)).unwrap();
        assert_eq!(hb_i64(&m), vec![vec![1, 2]]);
        assert!(m.contains(&v(&[3, 6])).unwrap());
        assert!(!m.contains(&v(&[2, 3])).unwrap());
        assert!(!m.contains(&v(&[-1, -2])).unwrap());
    }
}
