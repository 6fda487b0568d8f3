//! Small dense solves used when generating reconstruction tables.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut out = Matrix::zeros(n, n);
        for col in 0..n {
            let mut e = vec![0.0; n];
            e[col] = 1.0;
            let x = solve(self, &e)?;
            for row in 0..n {
                out.set(row, col, x[row]);
            }
        }
        Ok(out)
    }
}

/// Solve `A x = b` for `A` with at least as many rows as columns.
///
/// Gaussian elimination with partial pivoting over all rows; the rows left
/// over after elimination must be satisfied, otherwise the system is
/// reported as inconsistent.
pub(crate) fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let (m, n) = (a.rows, a.cols);
    assert!(m >= n && b.len() == m);
    let mut w = a.clone();
    let mut rhs = b.to_vec();
    let scale = a.data.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..m {
            if w.get(r, col).abs() > w.get(piv, col).abs() {
                piv = r;
            }
        }
        if w.get(piv, col).abs() <= 1e-14 * scale {
            return Err(Error::Internal("singular reconstruction system".into()));
        }
        if piv != col {
            for c in 0..n {
                let tmp = w.get(col, c);
                w.set(col, c, w.get(piv, c));
                w.set(piv, c, tmp);
            }
            rhs.swap(col, piv);
        }
        let p = w.get(col, col);
        for r in col + 1..m {
            let f = w.get(r, col) / p;
            if f != 0.0 {
                for c in col..n {
                    w.set(r, c, w.get(r, c) - f * w.get(col, c));
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in row + 1..n {
            acc -= w.get(row, c) * x[c];
        }
        x[row] = acc / w.get(row, row);
    }
    let bnorm = b.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    for r in 0..m {
        let mut acc = -b[r];
        for c in 0..n {
            acc += a.get(r, c) * x[c];
        }
        if acc.abs() > 1e-10 * bnorm * scale {
            return Err(Error::Internal("inconsistent over-determined system".into()));
        }
    }
    Ok(x)
}
