//! Minimal dense square matrices used by the numeric oracle.

use num_complex::Complex;

use crate::scalar::Real;

/// Dense real square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Real> Mat<R> {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![R::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

impl<R> std::ops::Index<(usize, usize)> for Mat<R> {
    type Output = R;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.n + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Mat<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.n + j]
    }
}

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<R> {
    n: usize,
    data: Vec<Complex<R>>,
}

impl<R: Real> CMat<R> {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            data: vec![Complex::new(R::zero(), R::zero()); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMat<R>) -> R {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(R::zero(), R::max)
    }

    /// Largest modulus of `H * conj(H)^T - I` (deviation from unitarity).
    pub fn unitarity_defect(&self) -> R {
        let n = self.n;
        let mut worst = R::zero();
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::new(R::zero(), R::zero());
                for k in 0..n {
                    acc += self[(i, k)] * self[(j, k)].conj();
                }
                let target = if i == j { R::one() } else { R::zero() };
                worst = worst.max((acc - Complex::new(target, R::zero())).norm());
            }
        }
        worst
    }

    /// Largest modulus of `H - H^T`.
    pub fn symmetry_defect(&self) -> R {
        let n = self.n;
        let mut worst = R::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        worst
    }
}

impl<R> std::ops::Index<(usize, usize)> for CMat<R> {
    type Output = Complex<R>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        &self.data[i * self.n + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for CMat<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        &mut self.data[i * self.n + j]
    }
}
