use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with row-major storage and exact `BigInt` entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    /// Builds a matrix from i64 rows; rows must have equal lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn from_bigint_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        assert!(rows.iter().all(|row| row.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_to_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn col_to_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.get(i, k) * &v[k]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.entries.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.rows {
            self.entries.swap(k * self.cols + i, k * self.cols + j);
        }
    }

    /// row_i += k * row_j
    pub fn add_row_multiple(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let delta = self.get(j, c) * k;
            let v = self.get(i, c) + delta;
            self.set(i, c, v);
        }
    }

    /// col_i += k * col_j
    pub fn add_col_multiple(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let delta = self.get(r, j) * k;
            let v = self.get(r, i) + delta;
            self.set(r, i, v);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.get(i, c);
            self.set(i, c, v);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }

    /// Rows i, j replaced by (a*r_i + b*r_j, c*r_i + d*r_j); [a,b;c,d] must be unimodular.
    pub fn left_elementary(&mut self, comps: [&BigInt; 4], i: usize, j: usize) {
        let [a, b, c, d] = comps;
        for k in 0..self.cols {
            let x = self.get(i, k).clone();
            let y = self.get(j, k).clone();
            self.set(i, k, a * &x + b * &y);
            self.set(j, k, c * &x + d * &y);
        }
    }

    /// Cols i, j replaced by (a*c_i + b*c_j, c*c_i + d*c_j); [a,b;c,d] must be unimodular.
    pub fn right_elementary(&mut self, comps: [&BigInt; 4], i: usize, j: usize) {
        let [a, b, c, d] = comps;
        for k in 0..self.rows {
            let x = self.get(k, i).clone();
            let y = self.get(k, j).clone();
            self.set(k, i, a * &x + b * &y);
            self.set(k, j, c * &x + d * &y);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for t in 0..n - 1 {
            if m.get(t, t).is_zero() {
                match (t + 1..n).find(|&i| !m.get(i, t).is_zero()) {
                    Some(i) => {
                        m.swap_rows(t, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in t + 1..n {
                for j in t + 1..n {
                    let v = (m.get(t, t) * m.get(i, j) - m.get(i, t) * m.get(t, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, t, BigInt::zero());
            }
            prev = m.get(t, t).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut rank = 0;
        for j in 0..cols {
            if rank == rows {
                break;
            }
            let pivot = (rank..rows).find(|&i| !m.get(i, j).is_zero());
            let Some(p) = pivot else { continue };
            m.swap_rows(rank, p);
            for i in rank + 1..rows {
                if m.get(i, j).is_zero() {
                    continue;
                }
                // r_i := pivot * r_i - m[i][j] * r_rank; exactness is irrelevant for rank
                let a = m.get(rank, j).clone();
                let b = m.get(i, j).clone();
                for k in 0..cols {
                    let v = &a * m.get(i, k) - &b * m.get(rank, k);
                    m.set(i, k, v);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.get(i, j)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_rank() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(a.det(), BigInt::from(6));
        assert_eq!(a.rank(), 2);

        let b = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(b.det(), BigInt::zero());
        assert_eq!(b.rank(), 1);

        let c = IntMatrix::from_rows(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]);
        assert_eq!(c.det(), BigInt::from(-90));
    }

    #[test]
    fn mul_and_transpose() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), IntMatrix::from_rows(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), IntMatrix::from_rows(&[vec![1, 3], vec![2, 4]]));
    }
}
