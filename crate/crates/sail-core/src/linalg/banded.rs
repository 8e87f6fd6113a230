//! Banded LU (partial pivoting) and banded Cholesky.
//!
//! Storage follows the usual band layout: entry `(i, j)` lives at band row
//! `kl + ku + i - j`, with `kl` extra super-diagonal rows reserved for pivot
//! fill. The finite-difference systems assembled in this crate have bandwidth
//! `~nx`, so a factorization is a few million flops at desk scale.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Band matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone)]
pub struct BandedMatrix<S> {
    n: usize,
    kl: usize,
    ku: usize,
    /// Column-major band storage with `2*kl + ku + 1` rows per column.
    data: Vec<S>,
}

impl<S: Scalar> BandedMatrix<S> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let stride = 2 * kl + ku + 1;
        Self { n, kl, ku, data: vec![S::zero(); stride * n] }
    }

    #[inline]
    fn stride(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.stride() + (self.kl + self.ku + i - j)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// In-band accessor; out-of-band entries read as zero.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        if i + self.ku + self.kl < j || j + self.kl < i {
            S::zero()
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Writes an entry; panics outside the declared band.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        assert!(i < self.n && j < self.n, "banded index out of range");
        assert!(i + self.ku >= j && j + self.kl >= i, "entry ({i},{j}) outside band (kl={}, ku={})", self.kl, self.ku);
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: S) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn matvec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![S::zero(); self.n];
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            let xj = x[j];
            if xj == S::zero() {
                continue;
            }
            for i in lo..=hi {
                y[i] = y[i] + self.data[self.idx(i, j)] * xj;
            }
        }
        y
    }

    /// LU with partial pivoting; consumes a copy of the band.
    pub fn lu(&self) -> Result<BandedLu<S>> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let kw = kl + ku; // effective upper width after fill
        let mut a = self.clone();
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let imax = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = a.get(k, k).abs();
            for i in k + 1..=imax {
                let v = a.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == S::zero() {
                return Err(Error::SolverFailure { context: format!("banded LU: zero pivot at column {k}") });
            }
            piv[k] = p;
            if p != k {
                let jmax = (k + kw).min(n - 1);
                for j in k..=jmax {
                    let ik = a.idx(k, j);
                    let ip = a.idx(p, j);
                    a.data.swap(ik, ip);
                }
            }
            let akk = a.get(k, k);
            for i in k + 1..=imax {
                let l = a.get(i, k) / akk;
                let ii = a.idx(i, k);
                a.data[ii] = l;
                if l == S::zero() {
                    continue;
                }
                let jmax = (k + kw).min(n - 1);
                for j in k + 1..=jmax {
                    let iaij = a.idx(i, j);
                    let iakj = a.idx(k, j);
                    a.data[iaij] = a.data[iaij] - l * a.data[iakj];
                }
            }
        }
        Ok(BandedLu { a, piv })
    }

    /// Cholesky for symmetric positive definite bands (uses the lower band).
    pub fn cholesky(&self) -> Result<BandedCholesky<S>> {
        let n = self.n;
        let kd = self.kl;
        let mut l = BandedMatrix::zeros(n, kd, 0);
        for j in 0..n {
            let mut diag = self.get(j, j);
            for k in j.saturating_sub(kd)..j {
                let v = l.get(j, k);
                diag = diag - v * v;
            }
            if diag <= S::zero() {
                return Err(Error::SolverFailure { context: format!("banded Cholesky: non-positive pivot at {j}") });
            }
            let diag = diag.sqrt();
            l.set(j, j, diag);
            let imax = (j + kd).min(n - 1);
            for i in j + 1..=imax {
                let mut v = self.get(i, j);
                let lo = i.saturating_sub(kd).max(j.saturating_sub(kd));
                for k in lo..j {
                    v = v - l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, v / diag);
            }
        }
        Ok(BandedCholesky { l })
    }
}

/// Factored band with pivot record.
#[derive(Debug, Clone)]
pub struct BandedLu<S> {
    a: BandedMatrix<S>,
    piv: Vec<usize>,
}

impl<S: Scalar> BandedLu<S> {
    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.a.n;
        assert_eq!(b.len(), n, "banded solve dimension");
        let kl = self.a.kl;
        let kw = self.a.kl + self.a.ku;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            if xk == S::zero() {
                continue;
            }
            let imax = (k + kl).min(n - 1);
            for i in k + 1..=imax {
                x[i] = x[i] - self.a.data[self.a.idx(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + kw).min(n - 1);
            let mut acc = x[k];
            for j in k + 1..=jmax {
                acc = acc - self.a.data[self.a.idx(k, j)] * x[j];
            }
            x[k] = acc / self.a.data[self.a.idx(k, k)];
        }
        x
    }

    pub fn solve_in_place(&self, b: &mut [S]) {
        let x = self.solve(b);
        b.copy_from_slice(&x);
    }
}

/// Lower Cholesky factor of an SPD band.
#[derive(Debug, Clone)]
pub struct BandedCholesky<S> {
    l: BandedMatrix<S>,
}

impl<S: Scalar> BandedCholesky<S> {
    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.l.n;
        let kd = self.l.kl;
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for i in 0..n {
            let mut acc = x[i];
            for k in i.saturating_sub(kd)..i {
                acc = acc - self.l.get(i, k) * x[k];
            }
            x[i] = acc / self.l.get(i, i);
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            let jmax = (i + kd).min(n - 1);
            for j in i + 1..=jmax {
                acc = acc - self.l.get(j, i) * x[j];
            }
            x[i] = acc / self.l.get(i, i);
        }
        x
    }
}
