//! Exact integer lattice and affine-monoid algebra.
//!
//! Everything in this module is computed over `BigInt`; there is no floating
//! point and no modular shortcut. The sizes this crate meets in practice are
//! tiny (ranks below ten, entries in single digits), so the algorithms are
//! chosen for being obviously correct rather than fast: Smith normal form by
//! elementary operations, dual cones by Fourier-Motzkin elimination, and
//! Hilbert bases by a completion procedure with a minimality filter.

mod hermite;
mod lattice;
mod matrix;
mod monoid;
mod snf;

pub use lattice::Lattice;
pub use matrix::IntMatrix;
pub use monoid::{saturate, AffineMonoid};
pub use snf::{smith_normal_form, torsion_free_quotient};

pub(crate) use hermite::{col_lattice_basis, row_hnf};
pub(crate) use snf::{snf_full, solve_linear};

use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by lattice and monoid operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntLatError {
    #[error("vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector does not lie in the ambient lattice")]
    OutsideLattice,
    #[error("matrix columns do not form a basis (not full column rank)")]
    NotABasis,
}

pub(crate) fn vec_is_zero(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.sign() == num_bigint::Sign::NoSign)
}

pub(crate) fn vec_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn vec_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn vec_neg(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| -x).collect()
}

/// Divides the vector by the gcd of its entries. Zero vectors are unchanged.
pub(crate) fn vec_primitive(v: &mut [BigInt]) {
    use num_integer::Integer;
    let mut g = BigInt::from(0);
    for x in v.iter() {
        g = g.gcd(x);
    }
    if g > BigInt::from(1) {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}
