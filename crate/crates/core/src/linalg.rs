//! Dense exact linear algebra over a [`FieldSpec`].

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FieldValue};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldValue>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Row-major construction. All rows must have the same length.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldValue>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { field, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldValue] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldValue>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FieldValue> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldValue]) -> Vec<FieldValue> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc.add_mul(a, b);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &FieldValue) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> FieldValue {
        let mut acc = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            acc += &self[(i, i)];
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = self[(r, c)].inv().expect("pivot is nonzero");
            for j in c..self.cols {
                self[(r, j)] *= &inv;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = self[(r, j)].clone();
                    self[(i, j)].sub_mul(&f, &v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : self · v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<FieldValue>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&m[(r, f)];
                }
                v
            })
            .collect()
    }

    /// Unique solution of `self · x = rhs` for a possibly overdetermined
    /// system. Fails with `SingularSystem` when the columns are dependent and
    /// `InconsistentSystem` when no solution exists.
    pub fn solve(&self, rhs: &[FieldValue]) -> Result<Vec<FieldValue>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(Error::InconsistentSystem);
        }
        if pivots.len() < self.cols {
            return Err(Error::SingularSystem);
        }
        Ok((0..self.cols).map(|r| aug[(r, self.cols)].clone()).collect())
    }

    /// Characteristic polynomial `det(x·I - self)`, coefficients from the
    /// constant term up. Reduces to upper Hessenberg form by similarity and
    /// then expands the determinant along the subdiagonal.
    pub fn charpoly(&self) -> Vec<FieldValue> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        let f = self.field;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            if i != m {
                h.swap_rows(i, m);
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            let t_inv = h[(m, m - 1)].inv().expect("pivot is nonzero");
            for i in m + 1..n {
                if h[(i, m - 1)].is_zero() {
                    continue;
                }
                let u = &h[(i, m - 1)] * &t_inv;
                for j in 0..n {
                    let v = h[(m, j)].clone();
                    h[(i, j)].sub_mul(&u, &v);
                }
                for r in 0..n {
                    let v = h[(r, i)].clone();
                    h[(r, m)].add_mul(&u, &v);
                }
            }
        }
        // polys[m] = characteristic polynomial of the leading m×m block.
        let mut polys: Vec<Vec<FieldValue>> = vec![vec![f.one()]];
        for m in 1..=n {
            let prev = &polys[m - 1];
            let mut pm = vec![f.zero(); m + 1];
            for (k, c) in prev.iter().enumerate() {
                pm[k + 1] += c;
                pm[k].sub_mul(&h[(m - 1, m - 1)], c);
            }
            let mut t = f.one();
            for i in 1..m {
                t *= &h[(m - i, m - i - 1)];
                let coef = &t * &h[(m - i - 1, m - 1)];
                if coef.is_zero() {
                    continue;
                }
                for (k, c) in polys[m - i - 1].iter().enumerate() {
                    pm[k].sub_mul(&coef, c);
                }
            }
            polys.push(pm);
        }
        polys.pop().expect("at least the empty product")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldValue;
    fn index(&self, (i, j): (usize, usize)) -> &FieldValue {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldValue {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Horner evaluation of a univariate polynomial given low-to-high.
pub fn eval_univariate(coeffs: &[FieldValue], x: &FieldValue) -> FieldValue {
    let mut acc = x.zero_like();
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}
