use std::fmt;

use crate::error::{Error, Result};

use super::field::{FieldSpec, Scalar};

/// Dense row-major matrix over a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for x in &row {
                if !field.contains(x) {
                    return Err(Error::DimensionMismatch(format!("entry {x} not in {field}")));
                }
            }
            data.extend(row);
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    /// Integer entries, converted into the field. Panics on ragged input.
    pub fn from_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(x));
            }
        }
        m
    }

    /// Sparse triplet input; repeated positions are summed.
    pub fn from_triplets(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: &[(usize, usize, Scalar)],
    ) -> Result<Self> {
        let mut m = Self::zero(field, rows, cols);
        for (r, c, x) in entries {
            if *r >= rows || *c >= cols {
                return Err(Error::DimensionMismatch(format!("triplet ({r},{c}) outside {rows}x{cols}")));
            }
            let v = &m[(*r, *c)] + x;
            m.set(*r, *c, v);
        }
        Ok(m)
    }

    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zero(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self[(r, c)].clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zero(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j].add_product(a, &rhs[(k, j)]);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                o.add_product(&self[(i, j)], x);
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Self::zero(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self[(r0 + i, c0 + j)].clone());
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block[(i, j)].clone());
            }
        }
    }

    /// Columns `cols` of `self`, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Self::zero(self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, j, self[(i, c)].clone());
            }
        }
        m
    }

    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut m = Self::zero(self.field, self.rows, self.cols + rhs.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, rhs);
        Ok(m)
    }

    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut m = Self::zero(self.field, self.rows + rhs.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, rhs);
        Ok(m)
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first nonzero
    /// entry at or below the current row, so the result is reproducible.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, row);
            let inv = m[(row, col)].inv();
            for j in col..m.cols {
                let v = &m[(row, j)] * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = -&m[(r, col)];
                for j in col..m.cols {
                    let (src, dst) = (row * m.cols + j, r * m.cols + j);
                    let pivot_entry = m.data[src].clone();
                    m.data[dst].add_product(&factor, &pivot_entry);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Columns form a basis of the null space. Basis vector `k` has a 1 at the
    /// `k`-th free column and 0 at every other free column.
    pub fn kernel_basis(&self) -> Matrix {
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zero(self.field, self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            k.set(fc, idx, self.field.one());
            for (r, &pc) in pivots.iter().enumerate() {
                k.set(pc, idx, -&reduced[(r, fc)]);
            }
        }
        k
    }

    /// Some `x` with `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let col = Matrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let Echelon { reduced, pivots } = self.hstack(&col)?.echelon();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = reduced[(r, self.cols)].clone();
        }
        Ok(Some(x))
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch("solve_matrix row counts differ".into()));
        }
        let Echelon { reduced, pivots } = self.hstack(rhs)?.echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zero(self.field, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, reduced[(r, self.cols + j)].clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let id = Matrix::identity(self.field, self.rows);
        match self.solve_matrix(&id) {
            Ok(Some(x)) if self.rank() == self.rows => Some(x),
            _ => None,
        }
    }

    /// Indices of a maximal set of independent columns, chosen greedily left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon().pivots
    }

    /// Basis (as columns) of the column space, taken from the original columns.
    pub fn column_space(&self) -> Matrix {
        self.select_columns(&self.independent_columns())
    }

    /// Rows form a basis of the left null space: `K * self = 0`.
    pub fn left_kernel(&self) -> Matrix {
        self.transpose().kernel_basis().transpose()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Coordinates of vectors with respect to a fixed basis of a subspace.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    basis: Matrix,
    // rows of `basis` on which it restricts to an invertible square matrix
    rows: Vec<usize>,
    restricted_inverse: Matrix,
}

impl SubspaceBasis {
    /// `basis` must have independent columns.
    pub fn new(basis: Matrix) -> Result<Self> {
        let rows = basis.transpose().independent_columns();
        if rows.len() != basis.cols() {
            return Err(Error::DimensionMismatch("subspace basis columns are dependent".into()));
        }
        let square = basis.transpose().select_columns(&rows).transpose();
        let restricted_inverse = square
            .inverse()
            .ok_or_else(|| Error::DimensionMismatch("singular restriction".into()))?;
        Ok(SubspaceBasis { basis, rows, restricted_inverse })
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of each column of `vectors`, assumed to lie in the subspace.
    pub fn coordinates(&self, vectors: &Matrix) -> Result<Matrix> {
        let restricted = vectors.transpose().select_columns(&self.rows).transpose();
        self.restricted_inverse.mul(&restricted)
    }

    /// Coordinates, checking membership exactly.
    pub fn coordinates_checked(&self, vectors: &Matrix) -> Result<Option<Matrix>> {
        let c = self.coordinates(vectors)?;
        if self.basis.mul(&c)? == *vectors {
            Ok(Some(c))
        } else {
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(FieldSpec::Rationals, rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::zero(FieldSpec::Rationals, 3, 2).rank(), 0);
        assert_eq!(Matrix::identity(FieldSpec::Rationals, 4).rank(), 4);
        assert_eq!(q(&[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(FieldSpec::Rationals, 3).kernel_basis().cols(), 0);
        assert_eq!(Matrix::zero(FieldSpec::Rationals, 2, 2).kernel_basis().cols(), 2);
        let k = q(&[vec![1, 1]]).kernel_basis();
        assert_eq!(k, q(&[vec![-1], vec![1]]));
    }

    #[test]
    fn solve_examples() {
        let f = FieldSpec::Rationals;
        let b: Vec<Scalar> = [3, -1, 7].iter().map(|&x| f.from_i64(x)).collect();
        assert_eq!(Matrix::identity(f, 3).solve(&b).unwrap(), Some(b.clone()));

        let m = q(&[vec![1, 1]]);
        let x = m.solve(&[f.from_i64(2)]).unwrap().unwrap();
        assert_eq!(m.apply(&x).unwrap(), vec![f.from_i64(2)]);

        assert_eq!(Matrix::zero(f, 2, 2).solve(&[f.one(), f.zero()]).unwrap(), None);
        assert!(Matrix::zero(f, 2, 2).solve(&[f.one()]).is_err());
    }

    #[test]
    fn prime_field_rank_differs_from_rationals() {
        let rows = vec![vec![1, 1], vec![1, 3]];
        assert_eq!(Matrix::from_i64(FieldSpec::Rationals, &rows).rank(), 2);
        assert_eq!(Matrix::from_i64(FieldSpec::Prime(2), &rows).rank(), 1);
    }

    #[test]
    fn triplets_sum_duplicates() {
        let f = FieldSpec::Rationals;
        let m = Matrix::from_triplets(f, 2, 2, &[(0, 1, f.one()), (0, 1, f.one()), (1, 0, f.from_i64(-3))])
            .unwrap();
        assert_eq!(m, q(&[vec![0, 2], vec![-3, 0]]));
        assert!(Matrix::from_triplets(f, 1, 1, &[(1, 0, f.one())]).is_err());
    }

    #[test]
    fn subspace_coordinates() {
        let basis = q(&[vec![1, 0], vec![1, 1], vec![0, 2]]);
        let s = SubspaceBasis::new(basis.clone()).unwrap();
        let v = q(&[vec![2], vec![5], vec![6]]);
        let c = s.coordinates_checked(&v).unwrap().unwrap();
        assert_eq!(basis.mul(&c).unwrap(), v);
        let outside = q(&[vec![1], vec![0], vec![0]]);
        assert!(s.coordinates_checked(&outside).unwrap().is_none());
    }
}
