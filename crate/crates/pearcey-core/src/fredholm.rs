//! Nystrom discretization of the Pearcey kernel on (-s, s): log-determinant,
//! small-s trace-series oracle, discrete resolvent, and the exact derivative
//! identities in s and rho.

use crate::cmatrix::Matrix3;
use crate::error::{Error, Result};
use crate::kernel::{KernelEvaluator, KernelPointData};
use crate::linalg::Lu;
use crate::pearcey_fn::{psi_tilde, AsymptoticFrame, PearceyParams};
use crate::quad::gauss_legendre_cached;
use num_complex::Complex64;
use rayon::prelude::*;

/// Gauss-Legendre rule mapped to [-s, s].
#[derive(Clone, Debug)]
pub struct NystromGrid {
    pub s: f64,
    pub m: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

pub fn build_grid(s: f64, m: usize) -> Result<NystromGrid> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("s = {s} must be > 0")));
    }
    if m < 4 || m % 2 != 0 {
        return Err(Error::InvalidNodeCount(m));
    }
    let (x, w) = gauss_legendre_cached(m);
    Ok(NystromGrid {
        s,
        m,
        nodes: x.iter().map(|t| t * s).collect(),
        weights: w.iter().map(|t| t * s).collect(),
    })
}

/// Weighted kernel matrix `a[i][j] = sqrt(w_i) K(x_i, x_j) sqrt(w_j)`.
pub struct DiscreteOperator {
    pub grid: NystromGrid,
    pub a: Vec<f64>,
    pub evaluator: KernelEvaluator,
}

pub fn discrete_operator(grid: NystromGrid, params: &PearceyParams) -> Result<DiscreteOperator> {
    discrete_operator_with_tol(grid, params, crate::pearcey_fn::DEFAULT_TOL)
}

pub fn discrete_operator_with_tol(
    grid: NystromGrid,
    params: &PearceyParams,
    tol: f64,
) -> Result<DiscreteOperator> {
    let evaluator = KernelEvaluator::with_tol(*params, &grid.nodes, tol)?;
    let m = grid.m;
    let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    let mut a = vec![0.0; m * m];
    a.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        for (j, rj) in row.iter_mut().enumerate() {
            *rj = sw[i] * evaluator.value(i, j) * sw[j];
        }
    });
    Ok(DiscreteOperator { grid, a, evaluator })
}

/// Gap result: log-determinant with an embedded m/2 convergence estimate.
#[derive(Clone, Copy, Debug)]
pub struct GapResult {
    pub s: f64,
    pub rho: f64,
    pub m: usize,
    pub f: f64,
    pub est_error: f64,
    pub df_ds: Option<f64>,
    pub df_drho: Option<f64>,
}

fn logdet_only(s: f64, params: &PearceyParams, m: usize, tol: f64) -> Result<f64> {
    let op = discrete_operator_with_tol(build_grid(s, m)?, params, tol)?;
    logdet_of_operator(&op)
}

fn logdet_of_operator(op: &DiscreteOperator) -> Result<f64> {
    let m = op.grid.m;
    let mut ia = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            ia[i * m + j] = f64::from(i == j) - op.a[i * m + j];
        }
    }
    let lu = Lu::factor(ia, m)?;
    let (logabs, sign) = lu.logdet();
    if sign <= 0.0 {
        return Err(Error::NonPositiveDeterminant);
    }
    Ok(logabs)
}

/// F(s; rho) = ln det(I - K) by pivoted LU, est_error = |F_m - F_{m/2}|.
pub fn fredholm_logdet(s: f64, params: &PearceyParams, m: usize) -> Result<GapResult> {
    fredholm_logdet_with_tol(s, params, m, crate::pearcey_fn::DEFAULT_TOL)
}

pub fn fredholm_logdet_with_tol(
    s: f64,
    params: &PearceyParams,
    m: usize,
    tol: f64,
) -> Result<GapResult> {
    let f = logdet_only(s, params, m, tol)?;
    let half = (m / 2).max(4);
    let half = if half % 2 == 0 { half } else { half + 1 };
    let f_half = logdet_only(s, params, half, tol)?;
    Ok(GapResult {
        s,
        rho: params.rho,
        m,
        f,
        est_error: (f - f_half).abs(),
        df_ds: None,
        df_drho: None,
    })
}

/// Small-s oracle: ln det(I - A) = -sum_n tr(A^n)/n over the Nystrom matrix.
pub fn trace_series_logdet(s: f64, params: &PearceyParams, n_terms: usize) -> Result<f64> {
    let m = 32;
    let op = discrete_operator(build_grid(s, m)?, params)?;
    // Frobenius norm as a cheap contraction bound
    let fro: f64 = op.a.iter().map(|v| v * v).sum::<f64>().sqrt();
    if fro >= 1.0 {
        return Err(Error::SeriesDivergent { norm: fro });
    }
    let mut acc = 0.0;
    let mut power = op.a.clone();
    for n in 1..=n_terms {
        let tr: f64 = (0..m).map(|i| power[i * m + i]).sum();
        acc -= tr / n as f64;
        if n < n_terms {
            power = mat_mul(&power, &op.a, m);
        }
    }
    Ok(acc)
}

fn mat_mul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * m];
    out.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        for k in 0..m {
            let aik = a[i * m + k];
            if aik != 0.0 {
                for j in 0..m {
                    row[j] += aik * b[k * m + j];
                }
            }
        }
    });
    out
}

/// Discrete resolvent R = (I - K)^{-1} K with Nystrom interpolation off-grid.
pub struct Resolvent {
    pub op: DiscreteOperator,
    lu: Lu,
    sqrt_w: Vec<f64>,
    params: PearceyParams,
}

pub fn resolvent(s: f64, params: &PearceyParams, m: usize) -> Result<Resolvent> {
    let op = discrete_operator(build_grid(s, m)?, params)?;
    let n = op.grid.m;
    let mut ia = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            ia[i * n + j] = f64::from(i == j) - op.a[i * n + j];
        }
    }
    let lu = Lu::factor(ia, n)?;
    let sqrt_w = op.grid.weights.iter().map(|w| w.sqrt()).collect();
    Ok(Resolvent {
        op,
        lu,
        sqrt_w,
        params: *params,
    })
}

impl Resolvent {
    /// Resolvent kernel values at node pairs: ((I-A)^{-1} A)_ij / (sw_i sw_j).
    pub fn at_nodes(&self, i: usize, j: usize) -> f64 {
        let m = self.op.grid.m;
        let mut col = vec![0.0; m];
        for r in 0..m {
            col[r] = self.op.a[r * m + j];
        }
        self.lu.solve_in_place(&mut col);
        // (I-A)^{-1} A = (I-A)^{-1} - I applied columnwise; col now holds
        // ((I-A)^{-1} A)_{. j}
        col[i] / (self.sqrt_w[i] * self.sqrt_w[j])
    }

    /// Off-grid evaluation through R = K + K R:
    /// R(u, v) = K(u, v) + sum_i w_i K(u, x_i) g_v(x_i) with (I - K) g_v = K(., v).
    pub fn value(&self, u: f64, v: f64) -> Result<f64> {
        let m = self.op.grid.m;
        let du = KernelPointData::compute(u, &self.params)?;
        let dv = KernelPointData::compute(v, &self.params)?;
        let mut b = vec![0.0; m];
        for i in 0..m {
            b[i] = self.sqrt_w[i] * self.op.evaluator.value_right(i, &dv);
        }
        self.lu.solve_in_place(&mut b);
        // b_i = sqrt(w_i) g_v(x_i)
        let mut acc = kernel_from(&du, &dv, self.params.rho);
        for i in 0..m {
            acc += self.sqrt_w[i] * self.op.evaluator.value_left(&du, i) * b[i];
        }
        Ok(acc)
    }
}

fn kernel_from(a: &KernelPointData, b: &KernelPointData, rho: f64) -> f64 {
    crate::kernel::kernel_from_data(a, b, rho)
}

/// dF/ds = -R(s, s) - R(-s, -s).
pub fn df_ds(s: f64, params: &PearceyParams, m: usize) -> Result<f64> {
    let r = resolvent(s, params, m)?;
    Ok(-(r.value(s, s)? + r.value(-s, -s)?))
}

/// Complex solve of (I - A) X = B reusing the real LU (A real, B complex).
fn solve_complex(lu: &Lu, b: &[Complex64]) -> Vec<Complex64> {
    let re: Vec<f64> = b.iter().map(|c| c.re).collect();
    let im: Vec<f64> = b.iter().map(|c| c.im).collect();
    let xr = lu.solve(&re);
    let xi = lu.solve(&im);
    xr.into_iter()
        .zip(xi)
        .map(|(r, i)| Complex64::new(r, i))
        .collect()
}

struct RhoIdentityData {
    /// capital F components at nodes: (I - K)^{-1} f, componentwise
    big_f: [Vec<Complex64>; 3],
    /// h components at nodes
    h: [Vec<Complex64>; 3],
    weights: Vec<f64>,
}

fn rho_identity_data(r: &Resolvent) -> Result<RhoIdentityData> {
    let grid = &r.op.grid;
    let m = grid.m;
    let params = r.params;
    let fh: Result<Vec<_>> = grid
        .nodes
        .par_iter()
        .map(|&x| crate::kernel::vectors_fh(x, &params))
        .collect();
    let fh = fh?;
    let mut big_f: [Vec<Complex64>; 3] = Default::default();
    let mut h: [Vec<Complex64>; 3] = Default::default();
    for c in 0..3 {
        let b: Vec<Complex64> = (0..m).map(|i| fh[i].f[c] * r.sqrt_w[i]).collect();
        let sol = solve_complex(&r.lu, &b);
        big_f[c] = (0..m).map(|i| sol[i] / r.sqrt_w[i]).collect();
        h[c] = (0..m).map(|i| fh[i].h[c]).collect();
    }
    Ok(RhoIdentityData {
        big_f,
        h,
        weights: grid.weights.clone(),
    })
}

/// dF/drho = -(1/2) int_{-s}^{s} (F_1 h_2 + F_2 h_3) dv at Nystrom level.
pub fn df_drho(s: f64, params: &PearceyParams, m: usize) -> Result<f64> {
    let r = resolvent(s, params, m)?;
    let d = rho_identity_data(&r)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d.weights.len() {
        acc += (d.big_f[0][i] * d.h[1][i] + d.big_f[1][i] * d.h[2][i]) * d.weights[i];
    }
    Ok(-0.5 * acc.re)
}

/// First moment matrices of the dressed problem: Y1 = int F(v) h^t(v) dv and
/// X1 = Psi_1 + Psi_0^{-1} Y1 Psi_0.
#[derive(Clone, Copy, Debug)]
pub struct MomentMatrices {
    pub y1: Matrix3,
    pub x1: Matrix3,
}

pub fn y1_x1_moments(s: f64, params: &PearceyParams, m: usize) -> Result<MomentMatrices> {
    let r = resolvent(s, params, m)?;
    let d = rho_identity_data(&r)?;
    let mut y1 = Matrix3::zeros();
    for i in 0..d.weights.len() {
        for a in 0..3 {
            for b in 0..3 {
                y1.0[a][b] += d.big_f[a][i] * d.h[b][i] * d.weights[i];
            }
        }
    }
    let frame = AsymptoticFrame::new(params);
    let x1 = frame
        .psi1
        .add(&frame.psi0.inverse()?.mul(&y1).mul(&frame.psi0));
    Ok(MomentMatrices { y1, x1 })
}

/// Gap probability with derivative identities filled in.
pub fn gap_result(s: f64, params: &PearceyParams, m: usize) -> Result<GapResult> {
    let mut g = fredholm_logdet(s, params, m)?;
    g.df_ds = Some(df_ds(s, params, m)?);
    g.df_drho = Some(df_drho(s, params, m)?);
    Ok(g)
}

/// Central difference of F in s (step scaled by max(1, s)).
pub fn df_ds_central(s: f64, params: &PearceyParams, m: usize, h0: f64) -> Result<f64> {
    let h = h0 * s.max(1.0);
    let fp = fredholm_logdet(s + h, params, m)?.f;
    let fm = fredholm_logdet(s - h, params, m)?.f;
    Ok((fp - fm) / (2.0 * h))
}

/// Central difference of F in rho.
pub fn df_drho_central(s: f64, params: &PearceyParams, m: usize, h: f64) -> Result<f64> {
    let fp = fredholm_logdet(
        s,
        &PearceyParams {
            rho: params.rho + h,
        },
        m,
    )?
    .f;
    let fm = fredholm_logdet(
        s,
        &PearceyParams {
            rho: params.rho - h,
        },
        m,
    )?
    .f;
    Ok((fp - fm) / (2.0 * h))
}

/// Wronskian access used by diagnostics: det PsiTilde at a point.
pub fn wronskian(z: Complex64, params: &PearceyParams) -> Result<Complex64> {
    Ok(psi_tilde(z, params)?.m.det())
}

/// Mean density at the origin, used by the small-s checks: K(0,0) = kernel_diag(0).
pub fn density_at_origin(params: &PearceyParams) -> Result<f64> {
    crate::kernel::kernel_diag(0.0, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P0: PearceyParams = PearceyParams { rho: 0.0 };

    #[test]
    fn grid_moments() {
        let g = build_grid(1.7, 24).unwrap();
        let sum_w: f64 = g.weights.iter().sum();
        assert!((sum_w - 2.0 * 1.7).abs() < 1e-14);
        let sum_wx: f64 = g.weights.iter().zip(&g.nodes).map(|(w, x)| w * x).sum();
        assert!(sum_wx.abs() < 1e-13);
        let sum_wx2: f64 = g.weights.iter().zip(&g.nodes).map(|(w, x)| w * x * x).sum();
        assert!((sum_wx2 - 2.0 * 1.7_f64.powi(3) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert!(build_grid(0.0, 8).is_err());
        assert!(build_grid(1.0, 7).is_err());
        assert!(build_grid(1.0, 2).is_err());
    }

    #[test]
    fn empty_interval_limit() {
        let g = fredholm_logdet(1e-3, &P0, 8).unwrap();
        assert!(g.f < 0.0 && g.f.abs() < 1e-2);
    }

    #[test]
    fn nystrom_convergence_at_s3() {
        let f40 = fredholm_logdet(3.0, &P0, 40).unwrap().f;
        let f80 = fredholm_logdet(3.0, &P0, 80).unwrap().f;
        assert!((f40 - f80).abs() < 1e-10, "{}", (f40 - f80).abs());
        // frozen regression value
        assert!((f40 - (-3.8578430627031888)).abs() < 1e-8);
    }

    #[test]
    fn trace_series_matches_logdet_small_s() {
        let f = fredholm_logdet(0.1, &P0, 16).unwrap().f;
        let t = trace_series_logdet(0.1, &P0, 6).unwrap();
        assert!((f - t).abs() < 1e-10, "{}", (f - t).abs());
    }

    #[test]
    fn trace_series_single_term_is_discrete_trace() {
        let t1 = trace_series_logdet(0.2, &P0, 1).unwrap();
        let g = build_grid(0.2, 32).unwrap();
        let ev = KernelEvaluator::new(P0, &g.nodes).unwrap();
        let tr: f64 = (0..g.m).map(|i| g.weights[i] * ev.value(i, i)).sum();
        assert!((t1 + tr).abs() < 1e-14);
    }

    #[test]
    fn trace_series_monotone_toward_logdet() {
        // partial sums decrease monotonically onto F (positive traces)
        let f = fredholm_logdet(0.2, &P0, 16).unwrap().f;
        let mut last = f64::INFINITY;
        let mut errs = Vec::new();
        for n in 1..=5 {
            let t = trace_series_logdet(0.2, &P0, n).unwrap();
            errs.push((t - f).abs());
            assert!(t < last + 1e-18);
            assert!(t >= f - 1e-12);
            last = t;
        }
        for w in errs.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn trace_series_divergence_detected() {
        assert!(matches!(
            trace_series_logdet(6.0, &P0, 3),
            Err(Error::SeriesDivergent { .. })
        ));
    }

    #[test]
    fn small_s_trace_consistency_rate() {
        // F(s) + 2 s K(0,0) -> 0 at rate O(s^2)
        let k0 = density_at_origin(&P0).unwrap();
        let r1 = fredholm_logdet(0.02, &P0, 12).unwrap().f + 2.0 * 0.02 * k0;
        let r2 = fredholm_logdet(0.04, &P0, 12).unwrap().f + 2.0 * 0.04 * k0;
        let order = (r2.abs() / r1.abs()).ln() / 2.0_f64.ln();
        assert!((order - 2.0).abs() < 0.6, "observed order {order}");
    }

    #[test]
    fn resolvent_identities() {
        let s = 1.0;
        let r = resolvent(s, &P0, 40).unwrap();
        // R -> K as s -> 0; the first-order departure is ~2s K(0,0)^2, so the
        // 1e-3 relative window needs s ~ 2e-3
        let small = resolvent(0.002, &P0, 8).unwrap();
        let k00 = density_at_origin(&P0).unwrap();
        assert!((small.value(0.0, 0.0).unwrap() - k00).abs() / k00 < 1e-3);
        // defining identity R = K + K R at node pairs
        let g = &r.op.grid;
        for (i, j) in [(3, 17), (11, 2), (25, 25)] {
            let u = g.nodes[i];
            let v = g.nodes[j];
            let rij = r.at_nodes(i, j);
            let mut acc = r.op.evaluator.value(i, j);
            for k in 0..g.m {
                acc += g.weights[k] * r.op.evaluator.value(i, k) * r.at_nodes(k, j);
            }
            assert!((rij - acc).abs() < 1e-10, "{rij} vs {acc}");
            // off-grid evaluator agrees at nodes
            assert!((r.value(u, v).unwrap() - rij).abs() < 1e-10);
        }
    }

    #[test]
    fn df_ds_matches_central_difference_and_small_s_limit() {
        let v = df_ds(2.0, &P0, 60).unwrap();
        let fd = df_ds_central(2.0, &P0, 60, 1e-3).unwrap();
        assert!((v - fd).abs() < 1e-6, "{}", (v - fd).abs());
        // endpoint identity dF/ds = -R(s,s) - R(-s,-s)
        let r = resolvent(2.0, &P0, 60).unwrap();
        let direct = -(r.value(2.0, 2.0).unwrap() + r.value(-2.0, -2.0).unwrap());
        assert!((v - direct).abs() < 1e-14);
        // s -> 0: dF/ds -> -2 K(0,0) with O(s) resolvent correction
        let v0 = df_ds(0.008, &P0, 8).unwrap();
        assert!((v0 + 2.0 * density_at_origin(&P0).unwrap()).abs() < 1e-3);
    }

    #[test]
    fn df_drho_matches_central_difference_and_vanishes_small_s() {
        let v = df_drho(2.0, &P0, 60).unwrap();
        let fd = df_drho_central(2.0, &P0, 60, 1e-3).unwrap();
        assert!((v - fd).abs() < 1e-6, "{}", (v - fd).abs());
        // the leading term is -2s d/drho K(0,0) with slope ~0.13
        let v0 = df_drho(0.003, &P0, 8).unwrap();
        assert!(v0.abs() < 1e-3, "{v0}");
    }

    #[test]
    fn derivative_identities_match_closed_asymptotics_at_s6() {
        // -3 s^{5/3}/2^{8/3} + rho s/2 - rho^2 s^{1/3}/(3 2^{4/3}) - 2/(9s)
        let v = df_ds(6.0, &P0, 80).unwrap();
        let c = crate::asymptotics::df_ds_expansion(6.0, 0.0);
        assert!(((v - c) / c).abs() < 0.02, "{v} vs {c}");
        // s^2/4 - rho s^{4/3}/2^{7/3} + rho^3/54 at rho = 1
        let p1 = PearceyParams { rho: 1.0 };
        let v = df_drho(6.0, &p1, 80).unwrap();
        let c = crate::asymptotics::df_drho_expansion(6.0, 1.0);
        assert!(((v - c) / c).abs() < 0.02, "{v} vs {c}");
    }

    #[test]
    fn moment_identities() {
        let params = PearceyParams { rho: 1.0 };
        let s = 2.0;
        let m = 80;
        let mm = y1_x1_moments(s, &params, m).unwrap();
        let d = df_drho(s, &params, m).unwrap();
        let via_y1 = -0.5 * (mm.y1.0[0][1] + mm.y1.0[1][2]).re;
        assert!((via_y1 - d).abs() < 1e-8, "{}", (via_y1 - d).abs());
        let via_x1 = -0.5 * (mm.x1.0[0][1] + mm.x1.0[1][2]).re + params.rho.powi(3) / 54.0;
        assert!((via_x1 - d).abs() < 1e-8, "{}", (via_x1 - d).abs());
        // x1 = Psi1 + Psi0^{-1} y1 Psi0 by construction; at rho = 0 both
        // identities coincide since the rho^3/54 shift vanishes
        let mm0 = y1_x1_moments(s, &P0, 40).unwrap();
        let a = -0.5 * (mm0.y1.0[0][1] + mm0.y1.0[1][2]).re;
        let b = -0.5 * (mm0.x1.0[0][1] + mm0.x1.0[1][2]).re;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn monotone_decreasing_in_s() {
        let mut prev = 0.0;
        for s in [0.5_f64, 1.0, 1.5, 2.0, 2.5] {
            let f = fredholm_logdet(s, &P0, 40).unwrap().f;
            assert!(f < prev, "F({s}) = {f} !< {prev}");
            prev = f;
        }
    }
}
