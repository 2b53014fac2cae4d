//! Dense real LU with partial pivoting, sized for Nystrom systems (m <= a few hundred).

use crate::error::{Error, Result};

pub struct Lu {
    n: usize,
    a: Vec<f64>,
    piv: Vec<usize>,
    sign: f64,
}

impl Lu {
    /// Factor a row-major n x n matrix.
    pub fn factor(mut a: Vec<f64>, n: usize) -> Result<Lu> {
        assert_eq!(a.len(), n * n);
        let mut piv = vec![0usize; n];
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for r in k + 1..n {
                let v = a[r * n + k].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular);
            }
            piv[k] = p;
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            let d = a[k * n + k];
            for r in k + 1..n {
                let f = a[r * n + k] / d;
                a[r * n + k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        a[r * n + j] -= f * a[k * n + j];
                    }
                }
            }
        }
        Ok(Lu { n, a, piv, sign })
    }

    /// (sum ln |u_ii|, sign of the determinant).
    pub fn logdet(&self) -> (f64, f64) {
        let mut s = 0.0;
        let mut sg = self.sign;
        for k in 0..self.n {
            let d = self.a[k * self.n + k];
            s += d.abs().ln();
            if d < 0.0 {
                sg = -sg;
            }
        }
        (s, sg)
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        for k in 0..n {
            for r in k + 1..n {
                b[r] -= self.a[r * n + k] * b[k];
            }
        }
        for k in (0..n).rev() {
            for j in k + 1..n {
                b[k] -= self.a[k * n + j] * b[j];
            }
            b[k] /= self.a[k * n + k];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_logdet() {
        let a = vec![4.0, 1.0, 0.5, 1.0, 3.0, -1.0, 0.5, -1.0, 2.0];
        let lu = Lu::factor(a.clone(), 3).unwrap();
        let x = lu.solve(&[1.0, 2.0, 3.0]);
        // residual
        for i in 0..3 {
            let mut r = 0.0;
            for j in 0..3 {
                r += a[i * 3 + j] * x[j];
            }
            let b = [1.0, 2.0, 3.0][i];
            assert!((r - b).abs() < 1e-12);
        }
        let (ld, sign) = lu.logdet();
        // det = 4(6-1) - 1(2+0.5) + .5(-1-1.5) = 20 - 2.5 - 1.25 = 16.25
        assert!(sign > 0.0);
        assert!((ld - 16.25_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn singular_detected() {
        let a = vec![1.0, 2.0, 2.0, 4.0];
        assert!(Lu::factor(a, 2).is_err());
    }
}
