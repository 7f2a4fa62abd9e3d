//! Cyclic Jacobi eigensolver for real symmetric matrices.
//!
//! Deliberately dependency-free: this is the independent numeric oracle the
//! exact character-side spectrum is checked against, so it must not share
//! any code path with it.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `A = V * diag(values) * V^T` of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<R> {
    /// Eigenvalues in the order matching the columns of `vectors`.
    pub values: Vec<R>,
    /// Orthogonal matrix whose column `k` is the eigenvector of `values[k]`.
    pub vectors: Mat<R>,
}

impl<R: Real> SymmetricEigen<R> {
    pub fn sorted_values(&self) -> Vec<R> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        v
    }
}

fn off_diagonal_norm<R: Real>(a: &Mat<R>) -> R {
    let n = a.dim();
    let mut sum = R::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Diagonalize a symmetric matrix with cyclic Jacobi rotation sweeps.
///
/// Converged when the off-diagonal Frobenius norm drops below
/// `1e-10 * n`; fails after 100 sweeps.
pub fn symmetric_eigen<R: Real>(a: &Mat<R>) -> Result<SymmetricEigen<R>> {
    let n = a.dim();
    let mut a = a.clone();
    let mut v = Mat::<R>::identity(n);
    if n <= 1 {
        return Ok(SymmetricEigen {
            values: (0..n).map(|i| a[(i, i)]).collect(),
            vectors: v,
        });
    }
    // 1e-10 * n at double precision; floored at a few ulps for f32
    let floor = R::epsilon() * R::from_f64_lossy(16.0);
    let tol = R::from_f64_lossy(1e-10).max(floor) * R::from_f64_lossy(n as f64);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < tol {
            return Ok(SymmetricEigen {
                values: (0..n).map(|i| a[(i, i)]).collect(),
                vectors: v,
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == R::zero() {
                    continue;
                }
                // rotation angle from a_pq and the diagonal gap
                let theta = (a[(q, q)] - a[(p, p)]) / (R::from_f64_lossy(2.0) * apq);
                let t = {
                    let sign = if theta < R::zero() { -R::one() } else { R::one() };
                    sign / (theta.abs() + (R::one() + theta * theta).sqrt())
                };
                let c = R::one() / (R::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::JacobiNoConvergence { sweeps: MAX_SWEEPS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_from(rows: &[&[f64]]) -> Mat<f64> {
        let n = rows.len();
        let mut m = Mat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    #[test]
    fn two_by_two_swap_matrix() {
        let a = mat_from(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let eig = symmetric_eigen(&a).unwrap();
        let vals = eig.sorted_values();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reconstructs_input() {
        let a = mat_from(&[
            &[4.0, 1.0, -2.0, 0.5],
            &[1.0, 3.0, 0.0, -1.0],
            &[-2.0, 0.0, 1.0, 2.0],
            &[0.5, -1.0, 2.0, -2.0],
        ]);
        let eig = symmetric_eigen(&a).unwrap();
        let n = a.dim();
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += eig.vectors[(i, k)] * eig.values[k] * eig.vectors[(j, k)];
                }
                assert!(
                    (acc - a[(i, j)]).abs() < 1e-9,
                    "entry ({i},{j}) reconstructed as {acc}, expected {}",
                    a[(i, j)]
                );
            }
        }
    }

    #[test]
    fn orthogonal_eigenvectors() {
        let a = mat_from(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 2.0]]);
        let eig = symmetric_eigen(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut dot = 0.0;
                for k in 0..3 {
                    dot += eig.vectors[(k, i)] * eig.vectors[(k, j)];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn works_at_single_precision() {
        let mut a = Mat::<f32>::zeros(2);
        a[(0, 1)] = 1.0;
        a[(1, 0)] = 1.0;
        let vals = symmetric_eigen(&a).unwrap().sorted_values();
        assert!((vals[0] + 1.0).abs() < 1e-5);
        assert!((vals[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn cycle_graph_spectrum() {
        // C4: eigenvalues 2, 0, 0, -2
        let a = mat_from(&[
            &[0.0, 1.0, 0.0, 1.0],
            &[1.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 1.0],
            &[1.0, 0.0, 1.0, 0.0],
        ]);
        let vals = symmetric_eigen(&a).unwrap().sorted_values();
        let expect = [-2.0, 0.0, 0.0, 2.0];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-10);
        }
    }
}
