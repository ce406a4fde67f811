use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[Vec<i64>]) -> Self {
        let mut m = Self::zero(rows, cols);
        assert_eq!(entries.len(), rows, "row count");
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "column count");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "integer matrix product shape");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_i64()).collect())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(source, j)] * c;
            self[(target, j)] += v;
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, source)] * c;
            self[(i, target)] += v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `left * m * right = diagonal`, with both transforms unimodular and their
/// inverses tracked alongside.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub left_inverse: IntMatrix,
    pub right: IntMatrix,
    pub right_inverse: IntMatrix,
    /// The full diagonal matrix, same shape as the input.
    pub diagonal: IntMatrix,
    /// Nonzero invariant factors `d_1 | d_2 | ...`, all positive.
    pub invariants: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    // row_t += c * row_s
    fn row_add(&mut self, t: usize, s: usize, c: &BigInt) {
        self.a.add_row_multiple(t, s, c);
        self.u.add_row_multiple(t, s, c);
        self.u_inv.add_col_multiple(s, t, &-c);
    }

    // col_t += c * col_s
    fn col_add(&mut self, t: usize, s: usize, c: &BigInt) {
        self.a.add_col_multiple(t, s, c);
        self.v.add_col_multiple(t, s, c);
        self.v_inv.add_row_multiple(s, t, &-c);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn smallest_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form by elementary unimodular row and column operations over
/// exact big integers.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut r = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut invariants = Vec::new();
    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = r.smallest_entry(t) {
            r.row_swap(t, pi);
            r.col_swap(t, pj);
            let pivot = r.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if r.a[(i, t)].is_zero() {
                    continue;
                }
                let q = &r.a[(i, t)] / &pivot;
                r.row_add(i, t, &-q);
                clean &= r.a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if r.a[(t, j)].is_zero() {
                    continue;
                }
                let q = &r.a[(t, j)] / &pivot;
                r.col_add(j, t, &-q);
                clean &= r.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !r.a[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => r.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.a[(t, t)].is_zero() {
            break;
        }
        if r.a[(t, t)].is_negative() {
            r.row_negate(t);
        }
        invariants.push(r.a[(t, t)].clone());
    }
    SmithForm {
        left: r.u,
        left_inverse: r.u_inv,
        right: r.v,
        right_inverse: r.v_inv,
        diagonal: r.a,
        invariants,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.left.mul(m).mul(&s.right), s.diagonal);
        assert_eq!(s.left.mul(&s.left_inverse), IntMatrix::identity(m.rows()));
        assert_eq!(s.right.mul(&s.right_inverse), IntMatrix::identity(m.cols()));
        assert!(s.diagonal.is_diagonal());
        for w in s.invariants.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.diagonal, IntMatrix::identity(2));
        assert_eq!(s.left, IntMatrix::identity(2));
        assert_eq!(s.right, IntMatrix::identity(2));
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&IntMatrix::from_i64(2, 2, &[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal, IntMatrix::from_i64(2, 2, &[vec![2, 0], vec![0, 4]]));
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zero(2, 3));
        assert!(s.invariants.is_empty());
        assert_eq!(s.diagonal, IntMatrix::zero(2, 3));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntMatrix::from_i64(2, 2, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariants, vec![BigInt::from(1), BigInt::from(6)]);
    }
}
