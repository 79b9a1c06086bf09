//! Dense constant matrices over [`Scalar`], with the exact elimination
//! kernels (rank, null space, determinant) the rest of the crate leans on.

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, backend: Backend) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(backend); rows * cols],
        }
    }

    pub fn identity(n: usize, backend: Backend) -> Self {
        let mut m = Matrix::zero(n, n, backend);
        for i in 0..n {
            m.set(i, i, Scalar::one(backend));
        }
        m
    }

    pub fn scalar_matrix(n: usize, alpha: Scalar) -> Self {
        let backend = alpha.backend();
        let mut m = Matrix::zero(n, n, backend);
        for i in 0..n {
            m.set(i, i, alpha.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            data.extend(row.iter().cloned());
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn backend(&self) -> Backend {
        self.data.first().map_or(Backend::Rational, Scalar::backend)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j { e.is_one() } else { e.is_zero() }
                })
            })
    }

    pub fn map(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| f(v)).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Matrix {
        self.map(|v| -v)
    }

    pub fn scale(&self, alpha: &Scalar) -> Matrix {
        self.map(|v| v * alpha)
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let backend = if self.data.is_empty() { rhs.backend() } else { self.backend() };
        let mut out = Matrix::zero(self.rows, rhs.cols, backend);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + &(a * b);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Matrix {
        self.map(Scalar::conj)
    }

    /// Kronecker product with the identity, `self ⊗ I_n`.
    pub fn kron_identity(&self, n: usize) -> Matrix {
        let backend = self.backend();
        let mut out = Matrix::zero(self.rows * n, self.cols * n, backend);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                for b in 0..n {
                    out.set(i * n + b, j * n + b, v.clone());
                }
            }
        }
        out
    }

    /// General Kronecker product, used only by test oracles.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols) * rhs.get(i % rhs.rows, j % rhs.cols)
        })
    }

    pub fn submatrix(&self, row_ids: &[usize], col_ids: &[usize]) -> Matrix {
        Matrix::from_fn(row_ids.len(), col_ids.len(), |i, j| {
            self.get(row_ids[i], col_ids[j]).clone()
        })
    }

    /// Exact determinant by fraction-producing Gaussian elimination.
    pub fn det(&self) -> Result<Scalar> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if !self.backend().is_exact() {
            return Err(Error::FloatBackendUnsupported);
        }
        let n = self.rows;
        let backend = self.backend();
        let mut a = self.clone();
        let mut det = Scalar::one(backend);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a.get(r, col).is_zero());
            let Some(p) = pivot_row else {
                return Ok(Scalar::zero(backend));
            };
            if p != col {
                for j in 0..n {
                    let tmp = a.get(p, j).clone();
                    a.set(p, j, a.get(col, j).clone());
                    a.set(col, j, tmp);
                }
                det = -det;
            }
            let pivot = a.get(col, col).clone();
            det = &det * &pivot;
            for r in col + 1..n {
                let factor = a.get(r, col) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    let tmp = self.get(p, j).clone();
                    self.set(p, j, self.get(row, j).clone());
                    self.set(row, j, tmp);
                }
            }
            let inv = self.get(row, col).inv().expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.cols {
                    let v = self.get(r, j) - &(&factor * self.get(row, j));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> Result<usize> {
        if !self.backend().is_exact() {
            return Err(Error::FloatBackendUnsupported);
        }
        let mut a = self.clone();
        Ok(a.rref().len())
    }

    /// Basis of the right null space as column vectors.
    pub fn null_space(&self) -> Result<Vec<Vec<Scalar>>> {
        if !self.backend().is_exact() {
            return Err(Error::FloatBackendUnsupported);
        }
        let backend = self.backend();
        let mut a = self.clone();
        let pivots = a.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Scalar::zero(backend); self.cols];
            v[fc] = Scalar::one(backend);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a.get(r, fc).clone();
            }
            basis.push(v);
        }
        Ok(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rq(rows: Vec<Vec<i64>>) -> Matrix {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|v| Scalar::from_int(v, Backend::Rational)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn det_of_small_matrices() {
        assert_eq!(rq(vec![vec![2]]).det().unwrap(), Scalar::from_int(2, Backend::Rational));
        let m = rq(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(m.det().unwrap(), Scalar::from_int(-2, Backend::Rational));
        let sing = rq(vec![vec![1, 2], vec![2, 4]]);
        assert!(sing.det().unwrap().is_zero());
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = rq(vec![vec![1, 2], vec![2, 4]]);
        let ns = m.null_space().unwrap();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            let prod0 = &(m.get(0, 0) * &v[0]) + &(m.get(0, 1) * &v[1]);
            assert!(prod0.is_zero());
        }
        assert_eq!(m.rank().unwrap(), 1);
    }

    #[test]
    fn kron_identity_layout() {
        let m = rq(vec![vec![3, 0], vec![0, 5]]);
        let k = m.kron_identity(2);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(0, 0), &Scalar::from_int(3, Backend::Rational));
        assert_eq!(k.get(1, 1), &Scalar::from_int(3, Backend::Rational));
        assert_eq!(k.get(2, 2), &Scalar::from_int(5, Backend::Rational));
        assert!(k.get(0, 1).is_zero());
    }
}
