//! Dense row-major matrices over a [`FieldTag`], with exact Gauss-Jordan elimination.

use std::fmt;

use super::scalar::{FieldTag, Scalar};
use super::subspace::Subspace;
use crate::{Error, Result};

/// A column vector; plain storage, the field is implied by its entries.
pub type Vector = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldTag,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// The reduced row echelon form with zero rows removed.
    pub canonical: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: FieldTag, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldTag, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(field: FieldTag, cols: usize, rows: Vec<Vector>) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            if let Some(bad) = row.iter().find(|s| s.field() != field) {
                return Err(Error::FieldMismatch { expected: field, found: bad.field() });
            }
            data.extend(row);
        }
        Ok(Matrix { field, rows: nrows, cols, data })
    }

    /// Integer-entry convenience constructor. Panics on ragged input.
    pub fn from_i64(field: FieldTag, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, rows).expect("ragged integer matrix")
    }

    /// Column vector from integers.
    pub fn vec_i64(field: FieldTag, v: &[i64]) -> Vector {
        v.iter().map(|&x| field.from_i64(x)).collect()
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// The columns in `range`, as a `rows × range.len()` matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Matrix {
        let cols = range.len();
        let data = (0..self.rows).flat_map(|i| self.row(i)[range.clone()].iter().cloned()).collect();
        Matrix { field: self.field, rows: self.rows, cols, data }
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { expected: self.field, found: other.field });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { data: self.data.iter().map(|a| a * c).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { data: self.data.iter().map(|a| -a).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Conjugate transpose; plain transpose outside ℚ(i).
    pub fn adjoint(&self) -> Matrix {
        let mut t = self.transpose();
        t.data.iter_mut().for_each(|a| *a = a.conj());
        t
    }

    /// `u · v*` for column vectors `u`, `v`.
    pub fn outer(field: FieldTag, u: &[Scalar], v: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(field, u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                out.data[i * v.len() + j] = a * &b.conj();
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Matrix { field: self.field, rows: self.rows, cols, data })
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Reduced row echelon form by Gauss-Jordan elimination. The result is unique, so it
    /// serves as the canonical representative of the row space.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        Rref { canonical: m, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// In-place elimination; returns pivot columns. Nonzero rows end up on top.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("pivot is nonzero");
            if !inv.is_one() {
                for j in c..cols {
                    let idx = r * cols + j;
                    self.data[idx] = &self.data[idx] * &inv;
                }
            }
            let pivot_row: Vec<Scalar> = self.row(r)[c..].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (off, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        self.data[i * cols + c + off].sub_mul_assign(&f, pv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Null space `{x : self·x = 0}` in canonical form.
    pub fn kernel(&self) -> Subspace {
        let rref = self.rref();
        Subspace::from_generators_unchecked(self.field, self.cols, kernel_generators(&rref, self.cols))
    }

    /// A particular solution of `self·x = rhs` with every free variable set to zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Option<Vector>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: rhs.len() });
        }
        let rhs_col = Matrix { field: self.field, rows: self.rows, cols: 1, data: rhs.to_vec() };
        let aug = self.hstack(&rhs_col)?;
        let Rref { canonical, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = canonical.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Entries as display strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.row_vectors().map(|r| r.iter().map(ToString::to_string).collect()).collect()
    }
}

/// Basis of the null space read off an RREF: one generator per free column.
pub(crate) fn kernel_generators(rref: &Rref, cols: usize) -> Vec<Vector> {
    let field = rref.canonical.field;
    let mut is_pivot = vec![false; cols];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (i, &p) in rref.pivots.iter().enumerate() {
                v[p] = -rref.canonical.get(i, f);
            }
            v
        })
        .collect()
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.row_vectors().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, a) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldTag = FieldTag::Q;

    #[test]
    fn rref_of_proportional_rows() {
        let m = Matrix::from_i64(Q, &[&[2, 4], &[1, 2]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.canonical, Matrix::from_i64(Q, &[&[1, 2]]));
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let id = Matrix::identity(Q, 2);
        let r = id.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.canonical, id);
    }

    #[test]
    fn rref_over_gf2() {
        // [[0,1],[0,0]]: column 0 has no pivot, row 0 pivots at column 1.
        let f = FieldTag::Gf(2);
        let r = Matrix::from_i64(f, &[&[0, 1], &[0, 0]]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.canonical, Matrix::from_i64(f, &[&[0, 1]]));
        assert_eq!(r.pivots, vec![1]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(Q, 2).kernel().dim(), 0);
        // N2 e2 = e1, N2 e1 = 0
        let n2 = Matrix::from_i64(Q, &[&[0, 1], &[0, 0]]);
        let k = n2.kernel();
        assert_eq!(k, Subspace::span(Q, 2, &[Matrix::vec_i64(Q, &[1, 0])]).unwrap());
        assert_eq!(Matrix::zeros(Q, 2, 2).kernel(), Subspace::full(Q, 2));
    }

    #[test]
    fn solve_picks_zero_free_variables() {
        // x0 + x1 = 3 → particular solution (3, 0)
        let m = Matrix::from_i64(Q, &[&[1, 1]]);
        let x = m.solve(&Matrix::vec_i64(Q, &[3])).unwrap().unwrap();
        assert_eq!(x, Matrix::vec_i64(Q, &[3, 0]));
        let inconsistent = Matrix::from_i64(Q, &[&[1, 1], &[1, 1]]);
        assert!(inconsistent.solve(&Matrix::vec_i64(Q, &[1, 2])).unwrap().is_none());
    }

    #[test]
    fn outer_uses_conjugate() {
        let f = FieldTag::Qi;
        let u = vec![f.parse("1").unwrap()];
        let v = vec![f.parse("i").unwrap()];
        let m = Matrix::outer(f, &u, &v);
        assert_eq!(m.get(0, 0), &f.parse("-i").unwrap());
    }

    #[test]
    fn mismatched_products_are_errors() {
        let a = Matrix::identity(Q, 2);
        let b = Matrix::identity(Q, 3);
        assert!(a.mul(&b).is_err());
        assert!(a.mul(&Matrix::identity(FieldTag::Gf(3), 2)).is_err());
    }
}
