use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::row_hnf;
use super::Lattice;

/// Smith normal form with all four transforms, used internally when inverses
/// are needed (lattice membership, saturated spans).
pub(crate) struct SnfFull {
    pub u: IntMatrix,
    pub uinv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub vinv: IntMatrix,
}

impl SnfFull {
    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).take_while(|&i| !self.s.get(i, i).is_zero()).count()
    }
}

struct Calc {
    b: IntMatrix,
    u: IntMatrix,
    uinv: IntMatrix,
    v: IntMatrix,
    vinv: IntMatrix,
}

impl Calc {
    fn new(a: &IntMatrix) -> Self {
        Calc {
            b: a.clone(),
            u: IntMatrix::identity(a.rows()),
            uinv: IntMatrix::identity(a.rows()),
            v: IntMatrix::identity(a.cols()),
            vinv: IntMatrix::identity(a.cols()),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.b.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.uinv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.b.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.vinv.swap_rows(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.b.negate_row(i);
        self.u.negate_row(i);
        self.uinv.negate_col(i);
    }

    fn add_row_multiple(&mut self, i: usize, j: usize, k: &BigInt) {
        self.b.add_row_multiple(i, j, k);
        self.u.add_row_multiple(i, j, k);
        // inverse of (r_i += k r_j) is (r_i -= k r_j); on columns: c_j -= k c_i
        let nk = -k;
        self.uinv.add_col_multiple(j, i, &nk);
    }

    fn add_col_multiple(&mut self, i: usize, j: usize, k: &BigInt) {
        self.b.add_col_multiple(i, j, k);
        self.v.add_col_multiple(i, j, k);
        let nk = -k;
        self.vinv.add_row_multiple(j, i, &nk);
    }

    /// rows (i,j) <- (a r_i + b r_j, c r_i + d r_j), with ad - bc = 1
    fn left_elementary(&mut self, comps: [&BigInt; 4], i: usize, j: usize) {
        let [a, b, c, d] = comps;
        debug_assert!((a * d - b * c).is_one());
        self.b.left_elementary(comps, i, j);
        self.u.left_elementary(comps, i, j);
        let (nb, nc) = (-b, -c);
        self.uinv.right_elementary([d, &nc, &nb, a], i, j);
    }

    fn right_elementary(&mut self, comps: [&BigInt; 4], i: usize, j: usize) {
        let [a, b, c, d] = comps;
        debug_assert!((a * d - b * c).is_one());
        self.b.right_elementary(comps, i, j);
        self.v.right_elementary(comps, i, j);
        let (nb, nc) = (-b, -c);
        self.vinv.left_elementary([d, &nc, &nb, a], i, j);
    }

    fn select_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.b.rows() {
            for j in t..self.b.cols() {
                let x = self.b.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if x.abs() < self.b.get(bi, bj).abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    fn clear_col(&mut self, t: usize) -> bool {
        let mut changed = false;
        for i in t + 1..self.b.rows() {
            if self.b.get(i, t).is_zero() {
                continue;
            }
            changed = true;
            let x = self.b.get(t, t).clone();
            let y = self.b.get(i, t).clone();
            if (&y % &x).is_zero() {
                let q = -(&y / &x);
                self.add_row_multiple(i, t, &q);
            } else {
                let e = x.extended_gcd(&y);
                let (a, b) = (&x / &e.gcd, &y / &e.gcd);
                let nb = -b;
                self.left_elementary([&e.x, &e.y, &nb, &a], t, i);
            }
        }
        changed
    }

    fn clear_row(&mut self, t: usize) -> bool {
        let mut changed = false;
        for j in t + 1..self.b.cols() {
            if self.b.get(t, j).is_zero() {
                continue;
            }
            changed = true;
            let x = self.b.get(t, t).clone();
            let y = self.b.get(t, j).clone();
            if (&y % &x).is_zero() {
                let q = -(&y / &x);
                self.add_col_multiple(j, t, &q);
            } else {
                let e = x.extended_gcd(&y);
                let (a, b) = (&x / &e.gcd, &y / &e.gcd);
                let nb = -b;
                self.right_elementary([&e.x, &e.y, &nb, &a], t, j);
            }
        }
        changed
    }

    fn diagonalize(&mut self) {
        let n = self.b.rows().min(self.b.cols());
        for t in 0..n {
            let Some((pi, pj)) = self.select_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let a = self.clear_col(t);
                let b = self.clear_row(t);
                if !a && !b {
                    break;
                }
            }
            if self.b.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }

    /// Restores the divisibility chain d1 | d2 | ... on the diagonal.
    fn normalize_chain(&mut self) {
        debug_assert!(self.b.is_diagonal());
        let n = self.b.rows().min(self.b.cols());
        let rank = (0..n).take_while(|&i| !self.b.get(i, i).is_zero()).count();
        if rank < 2 {
            return;
        }
        loop {
            let mut stable = true;
            for i in 0..rank - 1 {
                let x = self.b.get(i, i).clone();
                let y = self.b.get(i + 1, i + 1).clone();
                if (&y % &x).is_zero() {
                    continue;
                }
                stable = false;
                // put gcd(x, y) at position i, lcm at i+1
                let one = BigInt::one();
                self.add_col_multiple(i, i + 1, &one);
                let e = x.extended_gcd(&y);
                let (a, b) = (&x / &e.gcd, &y / &e.gcd);
                // rows: (r_i, r_{i+1}) <- (s r_i + t r_{i+1}, ...) with det 1
                let (s, t) = (e.x, e.y);
                let (tb, sa) = (&t * &b, &s * &a);
                let ntb = -tb;
                self.left_elementary([&one, &one, &ntb, &sa], i, i + 1);
                self.right_elementary([&s, &t, &(-&b), &a], i, i + 1);
                // clean numerical noise off the diagonal
                loop {
                    let a = self.clear_col(i);
                    let b = self.clear_row(i);
                    if !a && !b {
                        break;
                    }
                }
                loop {
                    let a = self.clear_col(i + 1);
                    let b = self.clear_row(i + 1);
                    if !a && !b {
                        break;
                    }
                }
                if self.b.get(i, i).is_negative() {
                    self.negate_row(i);
                }
                if self.b.get(i + 1, i + 1).is_negative() {
                    self.negate_row(i + 1);
                }
            }
            if stable {
                break;
            }
        }
    }
}

pub(crate) fn snf_full(a: &IntMatrix) -> SnfFull {
    let mut calc = Calc::new(a);
    calc.diagonalize();
    calc.normalize_chain();
    debug_assert_eq!(calc.u.mul(a).mul(&calc.v), calc.b);
    debug_assert!(calc.u.mul(&calc.uinv).is_identity());
    debug_assert!(calc.v.mul(&calc.vinv).is_identity());
    SnfFull {
        u: calc.u,
        uinv: calc.uinv,
        s: calc.b,
        v: calc.v,
        vinv: calc.vinv,
    }
}

/// Smith normal form: returns (U, S, V) with U·A·V = S, U and V unimodular,
/// S diagonal with nonnegative entries satisfying s1 | s2 | ... .
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let f = snf_full(a);
    (f.u, f.s, f.v)
}

/// Solves A x = b exactly over the integers, if a solution exists.
///
/// Accepts a precomputed decomposition of A so callers can solve repeatedly.
pub(crate) fn solve_linear(f: &SnfFull, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let (m, n) = (f.s.rows(), f.s.cols());
    assert_eq!(b.len(), m, "dimension mismatch in solve_linear");
    let ub = f.u.mul_vec(b);
    let mut z = vec![BigInt::zero(); n];
    let k = m.min(n);
    for i in 0..k {
        let d = f.s.get(i, i);
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            if !(&ub[i] % d).is_zero() {
                return None;
            }
            z[i] = &ub[i] / d;
        }
    }
    for item in ub.iter().take(m).skip(k) {
        if !item.is_zero() {
            return None;
        }
    }
    Some(f.v.mul_vec(&z))
}

/// Torsion-free quotient of Z^rank by the row span of `relations`.
///
/// Returns the quotient lattice and a projection matrix P with P·r = 0 for
/// every relation row r; a vector is killed by P exactly when some positive
/// multiple of it lies in the row span. The projection is canonicalized by
/// Hermite normal form so identical inputs produce identical output.
pub fn torsion_free_quotient(rank: usize, relations: &IntMatrix) -> (Lattice, IntMatrix) {
    assert_eq!(relations.cols(), rank, "relations must have `rank` columns");
    // Columns of relations^T generate the subgroup; U from its SNF splits off
    // the free part of the quotient.
    let c = relations.transpose();
    let f = snf_full(&c);
    let r = f.rank();
    let target = rank - r;
    let proj = IntMatrix::from_fn(target, rank, |i, j| f.u.get(r + i, j).clone());
    let (h, _) = row_hnf(&proj);
    (Lattice::standard(target), h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(s: &IntMatrix) -> Vec<i64> {
        let n = s.rows().min(s.cols());
        (0..n)
            .map(|i| {
                use num_traits::ToPrimitive;
                s.get(i, i).to_i64().unwrap()
            })
            .collect()
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(2);
        let (u, s, v) = smith_normal_form(&a);
        assert_eq!(s, IntMatrix::identity(2));
        assert!(u.is_unimodular());
        assert!(v.is_unimodular());
    }

    #[test]
    fn snf_two_by_two() {
        // [[2,4],[6,8]] -> diag(2, 4), checked by hand row reduction
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let (u, s, v) = smith_normal_form(&a);
        assert_eq!(diag_of(&s), vec![2, 4]);
        assert_eq!(u.mul(&a).mul(&v), s);
        assert!(u.is_unimodular());
        assert!(v.is_unimodular());
    }

    #[test]
    fn snf_zero() {
        let a = IntMatrix::zeros(1, 1);
        let (_, s, _) = smith_normal_form(&a);
        assert_eq!(s, IntMatrix::zeros(1, 1));
    }

    #[test]
    fn quotient_collapses_torsion() {
        // Z^2 / <(2, -2)>: free part has rank 1 and e1, e2 agree there.
        let rel = IntMatrix::from_rows(&[vec![2, -2]]);
        let (lat, proj) = torsion_free_quotient(2, &rel);
        assert_eq!(lat.rank(), 1);
        let e1 = proj.col_to_vec(0);
        let e2 = proj.col_to_vec(1);
        assert_eq!(e1, e2);
        assert!(!super::super::vec_is_zero(&e1));
    }

    #[test]
    fn quotient_no_relations() {
        let rel = IntMatrix::zeros(0, 3);
        let (lat, proj) = torsion_free_quotient(3, &rel);
        assert_eq!(lat.rank(), 3);
        assert!(proj.is_identity());
    }

    #[test]
    fn quotient_full_collapse() {
        let rel = IntMatrix::from_rows(&[vec![1]]);
        let (lat, proj) = torsion_free_quotient(1, &rel);
        assert_eq!(lat.rank(), 0);
        assert_eq!(proj.rows(), 0);
        assert_eq!(proj.cols(), 1);
    }

    #[test]
    fn solve_exact() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let f = snf_full(&a);
        let b = [BigInt::from(4), BigInt::from(9)];
        let x = solve_linear(&f, &b).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(3)]);
        let b_bad = [BigInt::from(1), BigInt::from(0)];
        assert!(solve_linear(&f, &b_bad).is_none());
    }
}
