//! Compressed-row sparse matrix.

use crate::linalg::BandedMatrix;
use crate::scalar::Scalar;

/// CSR matrix assembled from triplets.
#[derive(Debug, Clone)]
pub struct CsrMatrix<S> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<S>,
}

impl<S: Scalar> CsrMatrix<S> {
    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, S)]) -> Self {
        let mut per_row: Vec<Vec<(usize, S)>> = vec![Vec::new(); nrows];
        for &(i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet out of range");
            per_row[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut per_row {
            row.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let j = row[k].0;
                let mut acc = S::zero();
                while k < row.len() && row[k].0 == j {
                    acc = acc + row[k].1;
                    k += 1;
                }
                col_idx.push(j);
                values.push(acc);
            }
            row_ptr.push(col_idx.len());
        }
        Self { nrows, ncols, row_ptr, col_idx, values }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        match self.col_idx[lo..hi].binary_search(&j) {
            Ok(k) => self.values[lo + k],
            Err(_) => S::zero(),
        }
    }

    pub fn matvec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.ncols, "csr matvec dimension");
        let mut y = vec![S::zero(); self.nrows];
        for i in 0..self.nrows {
            let mut acc = S::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc = acc + self.values[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
        y
    }

    pub fn row_sum(&self, i: usize) -> S {
        self.values[self.row_ptr[i]..self.row_ptr[i + 1]].iter().copied().sum()
    }

    /// Largest absolute asymmetry `max |A_ij - A_ji|` (square matrices).
    pub fn max_asymmetry(&self) -> S {
        assert_eq!(self.nrows, self.ncols);
        let mut worst = S::zero();
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                let diff = (self.values[k] - self.get(j, i)).abs();
                worst = worst.max(diff);
            }
        }
        worst
    }

    /// Quadratic form `x^T A x`.
    pub fn quadratic_form(&self, x: &[S]) -> S {
        let ax = self.matvec(x);
        ax.iter().zip(x).map(|(&a, &b)| a * b).sum()
    }

    /// Bandwidth-preserving copy into band storage for direct factorization.
    pub fn to_banded(&self) -> BandedMatrix<S> {
        assert_eq!(self.nrows, self.ncols);
        let mut kl = 0usize;
        let mut ku = 0usize;
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                if i > j {
                    kl = kl.max(i - j);
                } else {
                    ku = ku.max(j - i);
                }
            }
        }
        let mut b = BandedMatrix::zeros(self.nrows, kl, ku);
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                b.set(i, self.col_idx[k], self.values[k]);
            }
        }
        b
    }

    /// Triplet view in row-major order, for the text export format.
    pub fn triplets(&self) -> Vec<(usize, usize, S)> {
        let mut out = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out.push((i, self.col_idx[k], self.values[k]));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_triplets_sum() {
        let m = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 0, -1.0)]);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(1, 0), -1.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn matvec_and_band_round_trip() {
        let m = CsrMatrix::from_triplets(
            3,
            3,
            &[(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0), (1, 2, -1.0), (2, 1, -1.0), (2, 2, 2.0)],
        );
        let x = vec![1.0, 2.0, 3.0];
        let y = m.matvec(&x);
        assert_eq!(y, vec![0.0, 0.0, 4.0]);
        let b = m.to_banded();
        assert_eq!(b.matvec(&x), y);
        assert_eq!(m.max_asymmetry(), 0.0);
    }
}
