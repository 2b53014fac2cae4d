//! Shared helpers for the pipeline benchmarks.

use num_complex::Complex64;
use pearcey_core::pearcey_fn::PearceyParams;

/// A deterministic set of evaluation points that defeats the ray cache
/// (every z is distinct).
pub fn fresh_points(n: usize, seed: u64) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            let t = (i as f64 + seed as f64 * 1e-3) * 0.7391;
            Complex64::new(3.0 * (t.sin()), 2.0 * (1.3 * t).cos())
        })
        .collect()
}

pub fn params() -> PearceyParams {
    PearceyParams { rho: 1.0 }
}
