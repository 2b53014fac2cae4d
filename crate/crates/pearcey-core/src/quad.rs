//! Gauss-Legendre rules and composite-panel contour quadrature.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; nodes come out symmetric
/// about 0 by construction (each root is mirrored).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        // middle node is exactly 0
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Panel rule order used for the contour integrals.
pub const PANEL_ORDER: usize = 20;

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Cached Gauss-Legendre rules for arbitrary n (grid building).
pub fn gauss_legendre_cached(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard.entry(n).or_insert_with(|| gauss_legendre(n)).clone()
}

/// Composite Gauss-Legendre integration of `f` over [0, t_max] with the given
/// panel length. Returns the vector of accumulated moments produced by `f`.
pub fn integrate_panels<const M: usize>(
    t_max: f64,
    panel_len: f64,
    mut f: impl FnMut(f64) -> [num_complex::Complex64; M],
) -> [num_complex::Complex64; M] {
    let (gx, gw) = panel_rule();
    let n_panels = (t_max / panel_len).ceil().max(1.0) as usize;
    let h = t_max / n_panels as f64;
    let mut acc = [num_complex::Complex64::new(0.0, 0.0); M];
    for p in 0..n_panels {
        let a = p as f64 * h;
        let c = a + 0.5 * h;
        for (xi, wi) in gx.iter().zip(gw.iter()) {
            let t = c + 0.5 * h * xi;
            let v = f(t);
            let w = 0.5 * h * wi;
            for m in 0..M {
                acc[m] += v[m] * w;
            }
        }
    }
    acc
}

/// Integrate with an embedded error estimate: the panel length is halved and
/// halved again until two successive passes agree to `tol` relative, or the
/// refinement budget is exhausted.
pub fn integrate_adaptive<const M: usize>(
    t_max: f64,
    panel_len: f64,
    tol: f64,
    f: &mut impl FnMut(f64) -> [num_complex::Complex64; M],
) -> Result<[num_complex::Complex64; M]> {
    let mut coarse = integrate_panels(t_max, panel_len, &mut *f);
    let mut h = panel_len;
    for _ in 0..3 {
        h *= 0.5;
        let fine = integrate_panels(t_max, h, &mut *f);
        let scale = fine.iter().map(|c| c.norm()).fold(1.0_f64, f64::max);
        let err = coarse
            .iter()
            .zip(fine.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0_f64, f64::max);
        if err <= tol * scale {
            return Ok(fine);
        }
        coarse = fine;
    }
    // one more refinement for the final estimate
    let fine = integrate_panels(t_max, h * 0.5, &mut *f);
    let scale = fine.iter().map(|c| c.norm()).fold(1.0_f64, f64::max);
    let err = coarse
        .iter()
        .zip(fine.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0_f64, f64::max);
    if err <= tol * scale {
        Ok(fine)
    } else {
        Err(Error::QuadratureNonConvergence {
            achieved: err / scale,
            target: tol,
        })
    }
}
