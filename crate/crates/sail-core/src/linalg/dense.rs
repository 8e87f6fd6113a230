//! Column-major dense matrix with LU and thin QR.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    nrows: usize,
    ncols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![S::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for j in 0..ncols {
            for i in 0..nrows {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from a column list; all columns must share a length.
    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "ragged column list");
            m.col_mut(j).copy_from_slice(c);
        }
        m
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        debug_assert!(i < self.nrows && j < self.ncols);
        self.data[j * self.nrows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        debug_assert!(i < self.nrows && j < self.ncols);
        self.data[j * self.nrows + i] = v;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[S] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [S] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self.get(j, i))
    }

    /// `y = A x`
    pub fn matvec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.ncols, "matvec dimension");
        let mut y = vec![S::zero(); self.nrows];
        for j in 0..self.ncols {
            let xj = x[j];
            if xj == S::zero() {
                continue;
            }
            let col = self.col(j);
            for i in 0..self.nrows {
                y[i] = y[i] + col[i] * xj;
            }
        }
        y
    }

    /// `y = A^T x`
    pub fn matvec_transpose(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.nrows, "matvec_transpose dimension");
        let mut y = vec![S::zero(); self.ncols];
        for j in 0..self.ncols {
            let col = self.col(j);
            let mut acc = S::zero();
            for i in 0..self.nrows {
                acc = acc + col[i] * x[i];
            }
            y[j] = acc;
        }
        y
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows, "matmul dimension");
        let mut out = Self::zeros(self.nrows, rhs.ncols);
        for j in 0..rhs.ncols {
            let y = self.matvec(rhs.col(j));
            out.col_mut(j).copy_from_slice(&y);
        }
        out
    }

    pub fn frobenius_norm(&self) -> S {
        self.data.iter().map(|&v| v * v).sum::<S>().sqrt()
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, &v| m.max(v.abs()))
    }

    /// LU with partial pivoting.
    pub fn lu(&self) -> Result<DenseLu<S>> {
        assert_eq!(self.nrows, self.ncols, "LU needs a square matrix");
        let n = self.nrows;
        let mut a = self.clone();
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let mut p = k;
            let mut best = a.get(k, k).abs();
            for i in k + 1..n {
                let v = a.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == S::zero() {
                return Err(Error::SolverFailure { context: format!("dense LU: zero pivot at column {k}") });
            }
            piv[k] = p;
            if p != k {
                for j in 0..n {
                    let t = a.get(k, j);
                    a.set(k, j, a.get(p, j));
                    a.set(p, j, t);
                }
            }
            let akk = a.get(k, k);
            for i in k + 1..n {
                let l = a.get(i, k) / akk;
                a.set(i, k, l);
                if l == S::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let v = a.get(i, j) - l * a.get(k, j);
                    a.set(i, j, v);
                }
            }
        }
        Ok(DenseLu { lu: a, piv })
    }

    /// Thin Householder QR; `self` must have `nrows >= ncols`.
    pub fn qr(&self) -> HouseholderQr<S> {
        assert!(self.nrows >= self.ncols, "thin QR needs nrows >= ncols");
        let (m, n) = (self.nrows, self.ncols);
        let mut a = self.clone();
        let mut betas = vec![S::zero(); n];
        for k in 0..n {
            // Householder vector for column k below the diagonal.
            let mut norm = S::zero();
            for i in k..m {
                let v = a.get(i, k);
                norm = norm + v * v;
            }
            let norm = norm.sqrt();
            if norm == S::zero() {
                betas[k] = S::zero();
                continue;
            }
            let akk = a.get(k, k);
            let alpha = if akk >= S::zero() { -norm } else { norm };
            let v0 = akk - alpha;
            let mut vnorm2 = v0 * v0;
            for i in k + 1..m {
                let v = a.get(i, k);
                vnorm2 = vnorm2 + v * v;
            }
            if vnorm2 == S::zero() {
                betas[k] = S::zero();
                a.set(k, k, alpha);
                continue;
            }
            let beta = lit::<S>(2.0) / vnorm2;
            // Apply to the trailing columns.
            for j in k + 1..n {
                let mut dot = v0 * a.get(k, j);
                for i in k + 1..m {
                    dot = dot + a.get(i, k) * a.get(i, j);
                }
                let s = beta * dot;
                let v = a.get(k, j) - s * v0;
                a.set(k, j, v);
                for i in k + 1..m {
                    let v = a.get(i, j) - s * a.get(i, k);
                    a.set(i, j, v);
                }
            }
            a.set(k, k, alpha);
            // Store the reflector tail below the diagonal, scaled so v0 = 1.
            for i in k + 1..m {
                let v = a.get(i, k) / v0;
                a.set(i, k, v);
            }
            betas[k] = beta * v0 * v0;
        }
        HouseholderQr { qr: a, betas }
    }
}

/// LU factors with pivot record.
#[derive(Debug, Clone)]
pub struct DenseLu<S> {
    lu: DenseMatrix<S>,
    piv: Vec<usize>,
}

impl<S: Scalar> DenseLu<S> {
    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.lu.nrows();
        assert_eq!(b.len(), n, "solve dimension");
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            if xk == S::zero() {
                continue;
            }
            for i in k + 1..n {
                x[i] = x[i] - self.lu.get(i, k) * xk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for j in k + 1..n {
                acc = acc - self.lu.get(k, j) * x[j];
            }
            x[k] = acc / self.lu.get(k, k);
        }
        x
    }
}

/// Thin QR factors stored compactly (reflectors below the diagonal).
#[derive(Debug, Clone)]
pub struct HouseholderQr<S> {
    qr: DenseMatrix<S>,
    betas: Vec<S>,
}

impl<S: Scalar> HouseholderQr<S> {
    /// Upper-triangular factor, `ncols x ncols`.
    pub fn r(&self) -> DenseMatrix<S> {
        let n = self.qr.ncols();
        DenseMatrix::from_fn(n, n, |i, j| if i <= j { self.qr.get(i, j) } else { S::zero() })
    }

    /// Applies `Q` to a tall vector in place (`len = nrows`).
    pub fn apply_q(&self, x: &mut [S]) {
        let (m, n) = (self.qr.nrows(), self.qr.ncols());
        assert_eq!(x.len(), m);
        for k in (0..n).rev() {
            let beta = self.betas[k];
            if beta == S::zero() {
                continue;
            }
            let mut dot = x[k];
            for i in k + 1..m {
                dot = dot + self.qr.get(i, k) * x[i];
            }
            let s = beta * dot;
            x[k] = x[k] - s;
            for i in k + 1..m {
                x[i] = x[i] - s * self.qr.get(i, k);
            }
        }
    }

    /// Thin `Q` (`nrows x ncols`).
    pub fn thin_q(&self) -> DenseMatrix<S> {
        let (m, n) = (self.qr.nrows(), self.qr.ncols());
        let mut q = DenseMatrix::zeros(m, n);
        for j in 0..n {
            let mut e = vec![S::zero(); m];
            e[j] = S::one();
            self.apply_q(&mut e);
            q.col_mut(j).copy_from_slice(&e);
        }
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> DenseMatrix<f64> {
        DenseMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
    }

    #[test]
    fn lu_solves_a_known_system() {
        let a = mat(&[&[4.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 2.0]]);
        let x_true = vec![1.0, -2.0, 3.0];
        let b = a.matvec(&x_true);
        let x = a.lu().unwrap().solve(&b);
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-12);
        }
    }

    #[test]
    fn lu_reports_singular() {
        let a = mat(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(a.lu().is_err());
    }

    #[test]
    fn qr_reconstructs() {
        let a = mat(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0], &[0.5, -1.0]]);
        let qr = a.qr();
        let q = qr.thin_q();
        let recon = q.matmul(&qr.r());
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                assert!((recon.get(i, j) - a.get(i, j)).abs() < 1e-12);
            }
        }
        // Q has orthonormal columns.
        let qtq = q.transpose().matmul(&q);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((qtq.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn transpose_matvec_agrees_with_explicit_transpose() {
        let a = mat(&[&[1.0, -2.0, 0.5], &[3.0, 4.0, -1.0]]);
        let x = vec![0.3, -0.7];
        let y1 = a.matvec_transpose(&x);
        let y2 = a.transpose().matvec(&x);
        for (u, v) in y1.iter().zip(&y2) {
            assert!((u - v).abs() < 1e-14);
        }
    }
}
