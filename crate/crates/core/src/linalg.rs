//! Small dense row-major matrices over `f64` and `Complex64`.
//!
//! Dimensions in this crate are tiny (a few dozen at most), so the matrices are
//! plain `Vec`-backed and every product is the textbook triple loop.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

macro_rules! matrix_common {
    ($ty:ident, $elem:ty, $zero:expr, $one:expr) => {
        impl $ty {
            pub fn zeros(rows: usize, cols: usize) -> Self {
                Self { rows, cols, data: vec![$zero; rows * cols] }
            }

            pub fn identity(n: usize) -> Self {
                let mut m = Self::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = $one;
                }
                m
            }

            pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> $elem) -> Self {
                let mut data = Vec::with_capacity(rows * cols);
                for r in 0..rows {
                    for c in 0..cols {
                        data.push(f(r, c));
                    }
                }
                Self { rows, cols, data }
            }

            /// Builds a matrix from row-major entries.
            pub fn from_row_major(rows: usize, cols: usize, data: Vec<$elem>) -> Result<Self> {
                if data.len() != rows * cols {
                    return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
                }
                Ok(Self { rows, cols, data })
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

            /// Row-major entries.
            pub fn as_slice(&self) -> &[$elem] {
                &self.data
            }

            pub fn transpose(&self) -> Self {
                Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
            }

            pub fn mul_vec(&self, x: &[$elem]) -> Result<Vec<$elem>> {
                if x.len() != self.cols {
                    return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
                }
                Ok((0..self.rows)
                    .map(|r| {
                        let row = &self.data[r * self.cols..(r + 1) * self.cols];
                        row.iter().zip(x).fold($zero, |acc, (a, b)| acc + *a * *b)
                    })
                    .collect())
            }

            pub fn matmul(&self, rhs: &Self) -> Result<Self> {
                if self.cols != rhs.rows {
                    return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
                }
                let mut out = Self::zeros(self.rows, rhs.cols);
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let a = self[(i, k)];
                        for j in 0..rhs.cols {
                            out[(i, j)] += a * rhs[(k, j)];
                        }
                    }
                }
                Ok(out)
            }

            pub fn scale(&self, factor: $elem) -> Self {
                Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| *x * factor).collect() }
            }

            /// Kronecker product `self ⊗ rhs`.
            pub fn kron(&self, rhs: &Self) -> Self {
                Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |r, c| {
                    self[(r / rhs.rows, c / rhs.cols)] * rhs[(r % rhs.rows, c % rhs.cols)]
                })
            }

            /// Frobenius norm of `self - rhs`.
            pub fn distance(&self, rhs: &Self) -> f64 {
                debug_assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
                self.data.iter().zip(&rhs.data).map(|(a, b)| sq(*a - *b)).sum::<f64>().sqrt()
            }

            /// Largest entrywise modulus of `self - rhs`.
            pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
                debug_assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
                self.data.iter().zip(&rhs.data).map(|(a, b)| sq(*a - *b).sqrt()).fold(0.0, f64::max)
            }

            pub fn frobenius_norm(&self) -> f64 {
                self.data.iter().map(|a| sq(*a)).sum::<f64>().sqrt()
            }
        }

        impl Index<(usize, usize)> for $ty {
            type Output = $elem;

            fn index(&self, (r, c): (usize, usize)) -> &$elem {
                debug_assert!(r < self.rows && c < self.cols);
                &self.data[r * self.cols + c]
            }
        }

        impl IndexMut<(usize, usize)> for $ty {
            fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut $elem {
                debug_assert!(r < self.rows && c < self.cols);
                &mut self.data[r * self.cols + c]
            }
        }

        impl Mul for &$ty {
            type Output = $ty;

            /// Panics on a dimension mismatch; use [`matmul`](#method.matmul) to get an error instead.
            fn mul(self, rhs: &$ty) -> $ty {
                self.matmul(rhs).expect("matrix dimensions must agree")
            }
        }
    };
}

trait SquaredModulus {
    fn squared_modulus(self) -> f64;
}

impl SquaredModulus for f64 {
    fn squared_modulus(self) -> f64 {
        self * self
    }
}

impl SquaredModulus for Complex64 {
    fn squared_modulus(self) -> f64 {
        self.norm_sqr()
    }
}

fn sq<T: SquaredModulus>(x: T) -> f64 {
    x.squared_modulus()
}

matrix_common!(RealMatrix, f64, 0.0, 1.0);
matrix_common!(ComplexMatrix, Complex64, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));

impl RealMatrix {
    /// `‖MᵀM − I‖_F`.
    pub fn orthogonality_residual(&self) -> f64 {
        let gram = &self.transpose() * self;
        gram.distance(&Self::identity(self.cols))
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        self.is_square() && self.orthogonality_residual() < tol
    }

    pub fn determinant(&self) -> f64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        // Gaussian elimination with partial pivoting.
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for k in 0..n {
            let pivot = (k..n).max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs())).unwrap_or(k);
            if a[(pivot, k)] == 0.0 {
                return 0.0;
            }
            if pivot != k {
                for c in 0..n {
                    a.data.swap(pivot * n + c, k * n + c);
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / a[(k, k)];
                for c in k..n {
                    a[(i, c)] -= factor * a[(k, c)];
                }
            }
        }
        det
    }
}

impl ComplexMatrix {
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    /// `‖V†V − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = &self.adjoint() * self;
        gram.distance(&Self::identity(self.cols))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_residual() < tol
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    /// Outer product `x y†`.
    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Self {
        Self::from_fn(x.len(), y.len(), |r, c| x[r] * y[c].conj())
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, z) in entries.iter().enumerate() {
            m[(i, i)] = *z;
        }
        m
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }
}

/// Hermitian inner product `⟨x, y⟩ = Σ x_i* y_i`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Kronecker product of two vectors.
pub fn kron_vec(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let tau = core::f64::consts::TAU;
    let mut r = theta - tau * (theta / tau).floor();
    // Rounding can land on either side of [0, 2π) near multiples of 2π.
    if r < 0.0 {
        r += tau;
    }
    if r >= tau {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(core::f64::consts::TAU - d)
}
