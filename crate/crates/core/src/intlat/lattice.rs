use num_bigint::BigInt;

use super::matrix::IntMatrix;
use super::snf::{snf_full, solve_linear, SnfFull};
use super::IntLatError;

/// A free abelian group of finite rank whose elements are integer vectors.
///
/// A lattice is either `Z^rank` in its own coordinates, or a sublattice of
/// some `Z^d` given by a basis matrix (one column per basis vector). The
/// distinction matters for saturation: the ambient group of a monoid is part
/// of the data, and saturating inside a proper sublattice gives a different
/// answer than saturating inside the full coordinate lattice.
#[derive(Clone)]
pub struct Lattice {
    rank: usize,
    /// d x rank embedding into coordinate space; None means standard Z^rank.
    basis: Option<IntMatrix>,
    /// cached decomposition of the basis, for membership solves
    basis_snf: Option<std::rc::Rc<SnfFull>>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.basis {
            None => write!(f, "Lattice::standard({})", self.rank),
            Some(b) => write!(f, "Lattice::sub(rank {}, dim {})", self.rank, b.rows()),
        }
    }
}

impl Lattice {
    /// The standard lattice Z^rank.
    pub fn standard(rank: usize) -> Self {
        Lattice {
            rank,
            basis: None,
            basis_snf: None,
        }
    }

    /// A sublattice of Z^d spanned by the columns of `basis` (d x rank).
    pub fn from_basis(basis: IntMatrix) -> Result<Self, IntLatError> {
        if basis.rank() != basis.cols() {
            return Err(IntLatError::NotABasis);
        }
        let f = snf_full(&basis);
        Ok(Lattice {
            rank: basis.cols(),
            basis_snf: Some(std::rc::Rc::new(f)),
            basis: Some(basis),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the coordinate space the lattice vectors live in.
    pub fn coord_dim(&self) -> usize {
        match &self.basis {
            None => self.rank,
            Some(b) => b.rows(),
        }
    }

    pub fn is_standard(&self) -> bool {
        self.basis.is_none()
    }

    fn check_dim(&self, v: &[BigInt]) -> Result<(), IntLatError> {
        if v.len() != self.coord_dim() {
            return Err(IntLatError::DimensionMismatch {
                expected: self.coord_dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Internal coordinates of a coordinate-space vector, if it lies in the lattice.
    pub fn coords_of(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, IntLatError> {
        self.check_dim(v)?;
        match &self.basis_snf {
            None => Ok(Some(v.to_vec())),
            Some(f) => Ok(solve_linear(f, v)),
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool, IntLatError> {
        Ok(self.coords_of(v)?.is_some())
    }

    /// Maps internal coordinates to the coordinate space.
    pub fn embed(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.rank, "coordinate dimension mismatch");
        match &self.basis {
            None => coords.to_vec(),
            Some(b) => b.mul_vec(coords),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn standard_contains_everything() {
        let l = Lattice::standard(2);
        assert!(l.contains(&[b(3), b(-5)]).unwrap());
        assert_eq!(
            l.contains(&[b(1)]),
            Err(IntLatError::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn sublattice_membership() {
        // {(a, b) : a + b even}, basis (1,1), (1,-1)
        let l = Lattice::from_basis(IntMatrix::from_rows(&[vec![1, 1], vec![1, -1]])).unwrap();
        assert!(l.contains(&[b(2), b(0)]).unwrap());
        assert!(l.contains(&[b(1), b(1)]).unwrap());
        assert!(!l.contains(&[b(1), b(0)]).unwrap());
        let c = l.coords_of(&[b(1), b(1)]).unwrap().unwrap();
        assert_eq!(l.embed(&c), vec![b(1), b(1)]);
    }

    #[test]
    fn rejects_dependent_columns() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(Lattice::from_basis(m).unwrap_err(), IntLatError::NotABasis);
    }
}
