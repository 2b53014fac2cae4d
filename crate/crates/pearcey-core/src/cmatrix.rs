//! Small dense complex matrices (2x2, 3x3) used by the Riemann-Hilbert pieces.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// 3x3 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix3(pub [[Complex64; 3]; 3]);

/// 2x2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix3 {
    pub fn zeros() -> Self {
        Matrix3([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for k in 0..3 {
            m.0[k][k] = ONE;
        }
        m
    }

    pub fn from_real(a: [[f64; 3]; 3]) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = Complex64::new(a[i][j], 0.0);
            }
        }
        m
    }

    pub fn from_columns(c0: [Complex64; 3], c1: [Complex64; 3], c2: [Complex64; 3]) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            m.0[i][0] = c0[i];
            m.0[i][1] = c1[i];
            m.0[i][2] = c2[i];
        }
        m
    }

    pub fn diag(d0: Complex64, d1: Complex64, d2: Complex64) -> Self {
        let mut m = Self::zeros();
        m.0[0][0] = d0;
        m.0[1][1] = d1;
        m.0[2][2] = d2;
        m
    }

    pub fn mul(&self, rhs: &Matrix3) -> Matrix3 {
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = ZERO;
                for k in 0..3 {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: [Complex64; 3]) -> [Complex64; 3] {
        let mut out = [ZERO; 3];
        for i in 0..3 {
            for k in 0..3 {
                out[i] += self.0[i][k] * v[k];
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix3) -> Matrix3 {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Matrix3) -> Matrix3 {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Matrix3 {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] *= c;
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix3 {
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[j][i];
            }
        }
        out
    }

    pub fn det(&self) -> Complex64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix3> {
        let mut a = self.0;
        let mut inv = Matrix3::identity().0;
        for col in 0..3 {
            let mut piv = col;
            for r in col + 1..3 {
                if a[r][col].norm() > a[piv][col].norm() {
                    piv = r;
                }
            }
            if a[piv][col].norm() == 0.0 {
                return Err(Error::Singular);
            }
            a.swap(col, piv);
            inv.swap(col, piv);
            let d = a[col][col];
            for j in 0..3 {
                a[col][j] /= d;
                inv[col][j] /= d;
            }
            for r in 0..3 {
                if r != col {
                    let f = a[r][col];
                    if f != ZERO {
                        for j in 0..3 {
                            let acj = a[col][j];
                            let icj = inv[col][j];
                            a[r][j] -= f * acj;
                            inv[r][j] -= f * icj;
                        }
                    }
                }
            }
        }
        Ok(Matrix3(inv))
    }

    /// Solve self * x = b.
    pub fn solve(&self, b: [Complex64; 3]) -> Result<[Complex64; 3]> {
        Ok(self.inverse()?.mul_vec(b))
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

impl Matrix2 {
    pub fn identity() -> Self {
        Matrix2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        let a = &self.0;
        let b = &rhs.0;
        Matrix2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn sub(&self, rhs: &Matrix2) -> Matrix2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}
