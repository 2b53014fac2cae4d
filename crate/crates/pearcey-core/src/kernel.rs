//! The Pearcey kernel K(x, y; rho) in its two representations: the
//! Brezin-Hikami bilinear form in p and q, and the 3x3 matrix form through
//! the inverse of the matrix solution.

use crate::cmatrix::{I, ZERO};
use crate::error::{Error, Result};
use crate::pearcey_fn::{pearcey_q, psi_tilde, PearceyParams, PearceyTriple};
use num_complex::Complex64;
use std::f64::consts::PI;

/// |x - y| below this switches to the diagonal/Taylor branch.
pub const NEAR_DIAG_THRESHOLD: f64 = 1e-4;

/// One evaluated kernel sample.
#[derive(Clone, Copy, Debug)]
pub struct KernelPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Evaluate K(x, y) with the stable near-diagonal branch.
pub fn kernel_point(x: f64, y: f64, params: &PearceyParams) -> Result<KernelPoint> {
    Ok(KernelPoint {
        x,
        y,
        value: kernel_bh(x, y, params)?,
    })
}

/// Per-point kernel data: p, q triples normalized by 1/2pi, with the higher
/// q-derivatives recovered from the third-order ODE.
#[derive(Clone, Copy, Debug)]
pub struct KernelPointData {
    pub x: f64,
    pub p: PearceyTriple,
    pub q: PearceyTriple,
    /// q''' = -y q + rho q'
    pub q3: Complex64,
    /// q'''' = -q - y q' + rho q''
    pub q4: Complex64,
}

impl KernelPointData {
    pub fn compute(x: f64, params: &PearceyParams) -> Result<Self> {
        Self::compute_with_tol(x, params, crate::pearcey_fn::DEFAULT_TOL)
    }

    pub fn compute_with_tol(x: f64, params: &PearceyParams, tol: f64) -> Result<Self> {
        let z = Complex64::new(x, 0.0);
        let p = crate::pearcey_fn::pearcey_p_with_tol(0, z, params, tol)?.scale(1.0 / (2.0 * PI));
        let q = crate::pearcey_fn::pearcey_q_with_tol(z, params, tol)?.scale(1.0 / (2.0 * PI));
        let q3 = -z * q.p + params.rho * q.dp;
        let q4 = -q.p - z * q.dp + params.rho * q.d2p;
        Ok(KernelPointData { x, p, q, q3, q4 })
    }
}

fn bh_numerator(px: &PearceyTriple, qy: &PearceyTriple, rho: f64) -> Complex64 {
    px.p * qy.d2p - px.dp * qy.dp + px.d2p * qy.p - rho * px.p * qy.p
}

/// Kernel from precomputed point data (used by the Nystrom assembly).
pub fn kernel_from_data(a: &KernelPointData, b: &KernelPointData, rho: f64) -> f64 {
    kernel_from_data_with_threshold(a, b, rho, NEAR_DIAG_THRESHOLD)
}

/// As `kernel_from_data` with an explicit near-diagonal switch distance. The
/// default balances difference-quotient cancellation against Taylor
/// truncation.
pub fn kernel_from_data_with_threshold(
    a: &KernelPointData,
    b: &KernelPointData,
    rho: f64,
    threshold: f64,
) -> f64 {
    let dx = a.x - b.x;
    if dx.abs() < threshold {
        // K(x, y) = K_diag(x) - g''(x)/2 (y - x) + O((y-x)^2) where
        // g(y) is the numerator at fixed x; g'' needs q''' and q'''' only.
        let diag = a.x * a.p.p * a.q.p + a.p.dp * a.q.d2p - a.p.d2p * a.q.dp;
        let g2 = a.p.p * a.q4 - a.p.dp * a.q3 + a.p.d2p * a.q.d2p - rho * a.p.p * a.q.d2p;
        (diag - g2 / 2.0 * (-dx)).re
    } else {
        (bh_numerator(&a.p, &b.q, rho) / dx).re
    }
}

/// Brezin-Hikami form [p(x)q''(y) - p'(x)q'(y) + p''(x)q(y) - rho p(x)q(y)]/(x-y),
/// with a Taylor branch inside `NEAR_DIAG_THRESHOLD` of the diagonal.
pub fn kernel_bh(x: f64, y: f64, params: &PearceyParams) -> Result<f64> {
    let a = KernelPointData::compute(x, params)?;
    if (x - y).abs() < NEAR_DIAG_THRESHOLD {
        let b = KernelPointData { x: y, ..a };
        Ok(kernel_from_data(&a, &b, params.rho))
    } else {
        let qy = pearcey_q(Complex64::new(y, 0.0), params)?.scale(1.0 / (2.0 * PI));
        Ok((bh_numerator(&a.p, &qy, params.rho) / (x - y)).re)
    }
}

/// Diagonal value K(x, x) = x p(x) q(x) + p'(x) q''(x) - p''(x) q'(x)
/// (L'Hopital of the bilinear form using q''' = -y q + rho q').
pub fn kernel_diag(x: f64, params: &PearceyParams) -> Result<f64> {
    let d = KernelPointData::compute(x, params)?;
    Ok((d.x * d.p.p * d.q.p + d.p.dp * d.q.d2p - d.p.d2p * d.q.dp).re)
}

/// Matrix representation (1/(2 pi i (x-y))) (0,1,1) PsiTilde^{-1}(y) PsiTilde(x) (1,0,0)^t.
/// Returns the real part; the imaginary residual is available from `kernel_rh_full`.
pub fn kernel_rh(x: f64, y: f64, params: &PearceyParams) -> Result<f64> {
    Ok(kernel_rh_full(x, y, params)?.re)
}

/// As `kernel_rh` but returning the full complex value before projection.
pub fn kernel_rh_full(x: f64, y: f64, params: &PearceyParams) -> Result<Complex64> {
    if x == y {
        return Err(Error::InvalidParameter(
            "kernel_rh requires x != y".to_string(),
        ));
    }
    let fx = psi_tilde(Complex64::new(x, 0.0), params)?.m;
    let hy = h_vector(y, params)?;
    let f = fx.mul_vec([Complex64::new(1.0, 0.0), ZERO, ZERO]);
    let dot = f[0] * hy[0] + f[1] * hy[1] + f[2] * hy[2];
    Ok(dot / (x - y))
}

fn h_vector(y: f64, params: &PearceyParams) -> Result<[Complex64; 3]> {
    let psi = psi_tilde(Complex64::new(y, 0.0), params)?.m;
    // h = (1/2 pi i) Psi^{-t} (0,1,1)^t: solve Psi^t h = (0,1,1)^t / (2 pi i)
    let rhs = [ZERO, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
    let sol = psi.transpose().solve(rhs)?;
    let c = 2.0 * PI * I;
    Ok([sol[0] / c, sol[1] / c, sol[2] / c])
}

/// The integrable-form vectors: f = PsiTilde(x) e_1, h = (1/2 pi i) PsiTilde^{-t}(y) (0,1,1)^t.
#[derive(Clone, Copy, Debug)]
pub struct IntegrableVectors {
    pub f: [Complex64; 3],
    pub h: [Complex64; 3],
}

pub fn vectors_fh(x: f64, params: &PearceyParams) -> Result<IntegrableVectors> {
    let psi = psi_tilde(Complex64::new(x, 0.0), params)?.m;
    let f = psi.mul_vec([Complex64::new(1.0, 0.0), ZERO, ZERO]);
    Ok(IntegrableVectors {
        f,
        h: h_vector(x, params)?,
    })
}

/// Precomputed kernel evaluator over a fixed set of points: one Pearcey
/// p/q evaluation per point, O(1) arithmetic per kernel entry afterwards.
pub struct KernelEvaluator {
    pub params: PearceyParams,
    pub data: Vec<KernelPointData>,
    pub near_diag_threshold: f64,
}

impl KernelEvaluator {
    pub fn new(params: PearceyParams, points: &[f64]) -> Result<Self> {
        Self::with_tol(params, points, crate::pearcey_fn::DEFAULT_TOL)
    }

    pub fn with_tol(params: PearceyParams, points: &[f64], tol: f64) -> Result<Self> {
        use rayon::prelude::*;
        let data: Result<Vec<_>> = points
            .par_iter()
            .map(|&x| KernelPointData::compute_with_tol(x, &params, tol))
            .collect();
        Ok(KernelEvaluator {
            params,
            data: data?,
            near_diag_threshold: NEAR_DIAG_THRESHOLD,
        })
    }

    pub fn set_near_diag_threshold(&mut self, threshold: f64) {
        self.near_diag_threshold = threshold;
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        kernel_from_data_with_threshold(
            &self.data[i],
            &self.data[j],
            self.params.rho,
            self.near_diag_threshold,
        )
    }

    /// Kernel between an arbitrary point and a precomputed node.
    pub fn value_left(&self, u: &KernelPointData, j: usize) -> f64 {
        kernel_from_data_with_threshold(u, &self.data[j], self.params.rho, self.near_diag_threshold)
    }

    pub fn value_right(&self, i: usize, v: &KernelPointData) -> f64 {
        kernel_from_data_with_threshold(&self.data[i], v, self.params.rho, self.near_diag_threshold)
    }
}
