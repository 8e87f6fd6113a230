//! One-sided Jacobi SVD.
//!
//! Hestenes sweeps orthogonalize column pairs of `A`; singular values are the
//! final column norms. Tall inputs are reduced by a thin QR first, wide inputs
//! by transposition. Accuracy is ample for the rank and spectrum diagnostics
//! this crate needs, and the routine stays generic over the scalar type.

use crate::linalg::DenseMatrix;
use crate::scalar::{lit, Scalar};

/// Thin SVD `A = U diag(sigma) V^T`, singular values descending.
#[derive(Debug, Clone)]
pub struct SvdResult<S> {
    pub u: DenseMatrix<S>,
    pub sigma: Vec<S>,
    pub v: DenseMatrix<S>,
}

impl<S: Scalar> SvdResult<S> {
    pub fn sigma_max(&self) -> S {
        self.sigma.first().copied().unwrap_or_else(S::zero)
    }

    pub fn sigma_min(&self) -> S {
        self.sigma.last().copied().unwrap_or_else(S::zero)
    }

    /// Count of singular values above `threshold`.
    pub fn rank_at(&self, threshold: S) -> usize {
        self.sigma.iter().filter(|&&s| s > threshold).count()
    }
}

/// Computes the thin SVD of an arbitrary dense matrix.
pub fn svd<S: Scalar>(a: &DenseMatrix<S>) -> SvdResult<S> {
    if a.nrows() < a.ncols() {
        let t = svd(&a.transpose());
        return SvdResult { u: t.v, sigma: t.sigma, v: t.u };
    }
    // Tall case: QR collapse keeps the Jacobi sweeps at ncols x ncols.
    if a.nrows() > a.ncols() {
        let qr = a.qr();
        let inner = jacobi(&qr.r());
        let u = qr.thin_q().matmul(&inner.u);
        return SvdResult { u, sigma: inner.sigma, v: inner.v };
    }
    jacobi(a)
}

fn jacobi<S: Scalar>(a: &DenseMatrix<S>) -> SvdResult<S> {
    let (m, n) = (a.nrows(), a.ncols());
    debug_assert!(m >= n);
    let mut u = a.clone();
    let mut v = DenseMatrix::identity(n);
    let eps = S::epsilon();
    let tol = eps * eps * lit::<S>(16.0);
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut app, mut aqq, mut apq) = (S::zero(), S::zero(), S::zero());
                for i in 0..m {
                    let up = u.get(i, p);
                    let uq = u.get(i, q);
                    app = app + up * up;
                    aqq = aqq + uq * uq;
                    apq = apq + up * uq;
                }
                if apq * apq <= tol * app * aqq || apq.abs() <= S::min_positive_value() {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (lit::<S>(2.0) * apq);
                let t = if zeta >= S::zero() {
                    S::one() / (zeta + (S::one() + zeta * zeta).sqrt())
                } else {
                    -S::one() / (-zeta + (S::one() + zeta * zeta).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let up = u.get(i, p);
                    let uq = u.get(i, q);
                    u.set(i, p, c * up - s * uq);
                    u.set(i, q, s * up + c * uq);
                }
                for i in 0..n {
                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, c * vp - s * vq);
                    v.set(i, q, s * vp + c * vq);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // Column norms are the singular values; normalize U where nonzero.
    let mut order: Vec<usize> = (0..n).collect();
    let mut sig = vec![S::zero(); n];
    for j in 0..n {
        let s = u.col(j).iter().map(|&x| x * x).sum::<S>().sqrt();
        sig[j] = s;
        if s > S::zero() {
            for i in 0..m {
                let x = u.get(i, j) / s;
                u.set(i, j, x);
            }
        }
    }
    order.sort_by(|&i, &j| sig[j].partial_cmp(&sig[i]).expect("finite singular values"));
    let mut u_s = DenseMatrix::zeros(m, n);
    let mut v_s = DenseMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        sigma.push(sig[src]);
        u_s.col_mut(dst).copy_from_slice(u.col(src));
        v_s.col_mut(dst).copy_from_slice(v.col(src));
    }
    SvdResult { u: u_s, sigma, v: v_s }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn reconstruct(res: &SvdResult<f64>) -> DenseMatrix<f64> {
        let n = res.sigma.len();
        let mut us = res.u.clone();
        for j in 0..n {
            for i in 0..us.nrows() {
                let v = us.get(i, j) * res.sigma[j];
                us.set(i, j, v);
            }
        }
        us.matmul(&res.v.transpose())
    }

    #[test]
    fn diagonal_matrix_is_exact() {
        let mut a = DenseMatrix::zeros(3, 3);
        a.set(0, 0, 3.0);
        a.set(1, 1, 1.0);
        a.set(2, 2, 2.0);
        let res = svd(&a);
        assert!((res.sigma[0] - 3.0).abs() < 1e-14);
        assert!((res.sigma[1] - 2.0).abs() < 1e-14);
        assert!((res.sigma[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_matrix_has_zero_tail() {
        // Two identical columns out of three.
        let a = DenseMatrix::from_fn(5, 3, |i, j| {
            let base = (i as f64 + 1.0) * 0.5;
            match j {
                0 => base,
                1 => base,
                _ => (i as f64).cos(),
            }
        });
        let res = svd(&a);
        assert!(res.sigma[2] < 1e-12 * res.sigma[0]);
        assert_eq!(res.rank_at(1e-10 * res.sigma[0]), 2);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let a = DenseMatrix::<f64>::zeros(4, 2);
        let res = svd(&a);
        assert_eq!(res.rank_at(0.0), 0);
    }

    #[test]
    fn tall_matrix_reconstructs() {
        let mut rng = StdRng::seed_from_u64(11);
        let a = DenseMatrix::from_fn(40, 7, |_, _| rng.gen_range(-1.0..1.0));
        let res = svd(&a);
        let r = reconstruct(&res);
        let mut worst: f64 = 0.0;
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                worst = worst.max((r.get(i, j) - a.get(i, j)).abs());
            }
        }
        assert!(worst < 1e-11, "reconstruction error {worst}");
        // Orthonormal columns of U.
        let utu = res.u.transpose().matmul(&res.u);
        for i in 0..7 {
            for j in 0..7 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((utu.get(i, j) - want).abs() < 1e-11);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_shapes_reconstruct(m in 1usize..12, n in 1usize..12, seed in 0u64..1000) {
            let mut rng = StdRng::seed_from_u64(seed);
            let a = DenseMatrix::from_fn(m, n, |_, _| rng.gen_range(-2.0..2.0));
            let res = svd(&a);
            let r = reconstruct(&res);
            let scale = 1.0 + a.max_abs();
            for j in 0..n {
                for i in 0..m {
                    prop_assert!((r.get(i, j) - a.get(i, j)).abs() < 1e-10 * scale);
                }
            }
            // Descending order.
            for w in res.sigma.windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
        }
    }
}
