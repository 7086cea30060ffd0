use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form: returns (H, U) with U·A = H, U unimodular,
/// H in row echelon form with positive pivots and entries above each pivot
/// reduced into [0, pivot). H is the canonical representative of the left
/// GL(Z) orbit of A.
pub(crate) fn row_hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        // euclidean elimination in column j below row r
        loop {
            let mut pivot: Option<usize> = None;
            for i in r..m {
                if h.get(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some(i),
                    Some(p) => {
                        if h.get(i, j).abs() < h.get(p, j).abs() {
                            pivot = Some(i);
                        }
                    }
                }
            }
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = -(h.get(i, j).div_floor(h.get(r, j)));
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, j).is_zero() {
            continue;
        }
        if h.get(r, j).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        // reduce entries above the pivot into [0, pivot)
        for i in 0..r {
            let q = -(h.get(i, j).div_floor(h.get(r, j)));
            if !q.is_zero() {
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Column-style HNF: canonical basis (as columns) of the lattice generated by
/// the columns of A. Zero columns are dropped.
pub(crate) fn col_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let (h, _) = row_hnf(&a.transpose());
    let rank = (0..h.rows())
        .take_while(|&i| (0..h.cols()).any(|j| !h.get(i, j).is_zero()))
        .count();
    IntMatrix::from_fn(a.rows(), rank, |i, j| h.get(j, i).clone())
}
