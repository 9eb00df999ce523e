//! Small dense vectors and matrices over [`Num`].

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::num::{Num, NumKey};

pub type Vector = Vec<Num>;

pub fn dot(a: &[Num], b: &[Num]) -> Num {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Num::ZERO, |acc, (x, y)| acc + *x * *y)
}

pub fn norm2(a: &[Num]) -> Num {
    dot(a, a)
}

pub fn add(a: &[Num], b: &[Num]) -> Vector {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

pub fn sub(a: &[Num], b: &[Num]) -> Vector {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

pub fn scale(a: &[Num], s: Num) -> Vector {
    a.iter().map(|x| *x * s).collect()
}

pub fn neg(a: &[Num]) -> Vector {
    a.iter().map(|x| -*x).collect()
}

pub fn zeros(n: usize) -> Vector {
    vec![Num::ZERO; n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Num::ONE;
    v
}

pub fn is_zero(a: &[Num]) -> bool {
    a.iter().all(Num::is_zero)
}

pub fn to_f64(a: &[Num]) -> Vec<f64> {
    a.iter().map(Num::to_f64).collect()
}

pub fn from_f64(a: &[f64]) -> Vector {
    a.iter().map(|&x| Num::Float(x)).collect()
}

pub fn from_ints(a: &[i64]) -> Vector {
    a.iter().map(|&x| Num::int(x)).collect()
}

pub fn key(a: &[Num]) -> Vec<NumKey> {
    a.iter().map(Num::key).collect()
}

/// Componentwise equality: exact when both sides are rational, `tol` otherwise.
pub fn approx_eq(a: &[Num], b: &[Num], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}

pub fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_f64(a: &[f64]) -> f64 {
    dot_f64(a, a).sqrt()
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Num>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Num::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Num::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_cols(cols: &[Vector]) -> Self {
        Matrix::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Num] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut m = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() && a.is_exact() {
                    continue;
                }
                for j in 0..other.cols {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Num]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul_vec_f64(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, x)| a.to_f64() * x).sum()).collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Num::is_zero)
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(Num::is_exact)
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && approx_eq(&self.data, &other.data, tol)
    }

    pub fn key(&self) -> Vec<NumKey> {
        key(&self.data)
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Largest magnitude pivot; for exact data any nonzero works but this is harmless.
            let best = (r..self.rows)
                .filter(|&i| !self[(i, c)].is_zero())
                .max_by(|&a, &b| self[(a, c)].to_f64().abs().partial_cmp(&self[(b, c)].to_f64().abs()).unwrap());
            let Some(p) = best else { continue };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in 0..self.cols {
                self[(r, j)] *= inv;
            }
            for i in 0..self.rows {
                if i != r {
                    let f = self[(i, c)];
                    if !f.is_zero() || !f.is_exact() {
                        for j in 0..self.cols {
                            let v = self[(r, j)];
                            self[(i, j)] -= f * v;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zeros(self.cols);
                v[f] = Num::ONE;
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)];
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Num::ONE;
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Num {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Num::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Num::ZERO;
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)];
            det *= piv;
            for i in c + 1..n {
                let f = m[(i, c)] / piv;
                for j in c..n {
                    let v = m[(c, j)];
                    m[(i, j)] -= f * v;
                }
            }
        }
        det
    }
}

/// A maximal linearly independent subset of `vectors`, in order.
pub fn independent_subset(vectors: &[Vector]) -> Vec<Vector> {
    let mut kept: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut trial = kept.clone();
        trial.push(v.clone());
        if Matrix::from_rows(&trial).rank() == trial.len() {
            kept = trial;
        }
    }
    kept
}

/// Orthogonal projector onto the span of the (independent) `basis`.
pub fn projector(basis: &[Vector], dim: usize) -> Matrix {
    if basis.is_empty() {
        return Matrix::zeros(dim, dim);
    }
    let b = Matrix::from_cols(basis);
    let gram = b.transpose().mul(&b);
    let inv = gram.inverse().expect("projector basis must be independent");
    b.mul(&inv).mul(&b.transpose())
}

/// Numerical rank by singular values, relative threshold `rel`.
pub fn numerical_rank(m: &DMatrix<f64>, rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * max).count()
}

impl Index<(usize, usize)> for Matrix {
    type Output = Num;
    fn index(&self, (i, j): (usize, usize)) -> &Num {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Num {
        &mut self.data[i * self.cols + j]
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        let rows: Vec<Vector> = Vec::deserialize(d)?;
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(serde::de::Error::custom("ragged matrix rows"));
            }
        }
        Ok(Matrix::from_rows(&rows))
    }
}
