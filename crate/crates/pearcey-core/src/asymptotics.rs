//! The large-s expansion of F(s; rho), the closed-form derivative expansions,
//! the fit of the undetermined constant, and the gap-decay exponent.

use crate::error::{Error, Result};

/// Termwise evaluation of
/// F ~ -9 s^{8/3}/2^{17/3} + rho s^2/4 - rho^2 s^{4/3}/2^{10/3} - (2/9) ln s + rho^4/216 + c.
#[derive(Clone, Copy, Debug)]
pub struct ExpansionTerms {
    pub s: f64,
    pub rho: f64,
    pub leading: f64,
    pub quad: f64,
    pub frac: f64,
    pub log: f64,
    pub rho4: f64,
    pub c: f64,
}

impl ExpansionTerms {
    pub fn total(&self) -> f64 {
        self.leading + self.quad + self.frac + self.log + self.rho4 + self.c
    }
}

pub fn f_expansion(s: f64, rho: f64, c: f64) -> ExpansionTerms {
    ExpansionTerms {
        s,
        rho,
        leading: -9.0 * s.powf(8.0 / 3.0) / 2.0_f64.powf(17.0 / 3.0),
        quad: rho * s * s / 4.0,
        frac: -rho * rho * s.powf(4.0 / 3.0) / 2.0_f64.powf(10.0 / 3.0),
        log: -2.0 / 9.0 * s.ln(),
        rho4: rho.powi(4) / 216.0,
        c,
    }
}

/// dF/ds ~ -3 s^{5/3}/2^{8/3} + rho s/2 - rho^2 s^{1/3}/(3 2^{4/3}) - 2/(9s).
pub fn df_ds_expansion(s: f64, rho: f64) -> f64 {
    -3.0 * s.powf(5.0 / 3.0) / 2.0_f64.powf(8.0 / 3.0) + rho * s / 2.0
        - rho * rho * s.powf(1.0 / 3.0) / (3.0 * 2.0_f64.powf(4.0 / 3.0))
        - 2.0 / (9.0 * s)
}

/// dF/drho ~ s^2/4 - rho s^{4/3}/2^{7/3} + rho^3/54.
pub fn df_drho_expansion(s: f64, rho: f64) -> f64 {
    s * s / 4.0 - rho * s.powf(4.0 / 3.0) / 2.0_f64.powf(7.0 / 3.0) + rho.powi(3) / 54.0
}

#[derive(Clone, Copy, Debug)]
pub struct FitSample {
    pub s: f64,
    pub f_num: f64,
    /// remainder F_num minus the expansion with c = 0
    pub g: f64,
}

/// Least-squares fit of the remainder to c + a s^{-2/3}.
#[derive(Clone, Debug)]
pub struct FitReport {
    pub rho: f64,
    pub c_hat: f64,
    /// coefficient of the s^{-2/3} term
    pub a_hat: f64,
    /// plain OLS standard error of c_hat
    pub c_stderr_ols: f64,
    /// truncation-aware error bar: max(OLS stderr, |c from the two-term model
    /// minus c from the one-term model|). The OLS number alone understates the
    /// uncertainty of a truncated asymptotic model.
    pub c_stderr: f64,
    /// intercept of the extended fit c + a s^{-2/3} + b s^{-4/3}
    pub c_hat_extended: f64,
    /// log-log slope of |g(s) - c_hat| against s
    pub residual_exponent: f64,
    pub samples: Vec<FitSample>,
}

pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Solve the two-column normal equations for y ~ c + a u.
fn fit_two(u: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = u.len() as f64;
    let su: f64 = u.iter().sum();
    let suu: f64 = u.iter().map(|v| v * v).sum();
    let sy: f64 = y.iter().sum();
    let suy: f64 = u.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * suu - su * su;
    let c = (suu * sy - su * suy) / det;
    let a = (n * suy - su * sy) / det;
    // OLS variance of the intercept
    let dof = (u.len().max(3) - 2) as f64;
    let rss: f64 = u
        .iter()
        .zip(y)
        .map(|(ui, yi)| {
            let r = yi - c - a * ui;
            r * r
        })
        .sum();
    let sigma2 = rss / dof;
    let var_c = sigma2 * suu / det;
    (c, a, var_c.max(0.0).sqrt())
}

/// Three-parameter fit y ~ c + a u + b u^2 (u = s^{-2/3}), used only to gauge
/// how much the one-term c moves when the next power is admitted.
fn fit_three_c(u: &[f64], y: &[f64]) -> f64 {
    let n = u.len();
    let mut ata = [[0.0_f64; 3]; 3];
    let mut atb = [0.0_f64; 3];
    for i in 0..n {
        let row = [1.0, u[i], u[i] * u[i]];
        for a in 0..3 {
            for b in 0..3 {
                ata[a][b] += row[a] * row[b];
            }
            atb[a] += row[a] * y[i];
        }
    }
    // 3x3 Gaussian elimination
    for k in 0..3 {
        let mut p = k;
        for r in k + 1..3 {
            if ata[r][k].abs() > ata[p][k].abs() {
                p = r;
            }
        }
        ata.swap(k, p);
        atb.swap(k, p);
        for r in k + 1..3 {
            let f = ata[r][k] / ata[k][k];
            for c in k..3 {
                ata[r][c] -= f * ata[k][c];
            }
            atb[r] -= f * atb[k];
        }
    }
    for k in (0..3).rev() {
        for c in k + 1..3 {
            atb[k] -= ata[k][c] * atb[c];
        }
        atb[k] /= ata[k][k];
    }
    atb[0]
}

/// Fit c + a s^{-2/3} to G(s) = F_num(s) - expansion(c = 0).
pub fn fit_constant(samples: &[(f64, f64)], rho: f64) -> Result<FitReport> {
    if samples.len() < 5 {
        return Err(Error::IllConditionedFit(format!(
            "need at least 5 samples, got {}",
            samples.len()
        )));
    }
    let smin = samples
        .iter()
        .map(|(s, _)| *s)
        .fold(f64::INFINITY, f64::min);
    let smax = samples.iter().map(|(s, _)| *s).fold(0.0, f64::max);
    if smax / smin < 1.2 {
        return Err(Error::IllConditionedFit(format!(
            "s-range [{smin}, {smax}] too narrow for the intercept"
        )));
    }
    let fit_samples: Vec<FitSample> = samples
        .iter()
        .map(|&(s, f_num)| FitSample {
            s,
            f_num,
            g: f_num - f_expansion(s, rho, 0.0).total(),
        })
        .collect();
    let u: Vec<f64> = fit_samples.iter().map(|p| p.s.powf(-2.0 / 3.0)).collect();
    let g: Vec<f64> = fit_samples.iter().map(|p| p.g).collect();
    let (c_hat, a_hat, c_stderr_ols) = fit_two(&u, &g);
    let c_hat_extended = fit_three_c(&u, &g);
    let c_stderr = c_stderr_ols.max((c_hat_extended - c_hat).abs());
    // log-log regression of |g - c_hat| against s
    let lx: Vec<f64> = fit_samples.iter().map(|p| p.s.ln()).collect();
    let ly: Vec<f64> = fit_samples
        .iter()
        .map(|p| (p.g - c_hat).abs().max(1e-300).ln())
        .collect();
    let residual_exponent = ols_slope(&lx, &ly);
    Ok(FitReport {
        rho,
        c_hat,
        a_hat,
        c_stderr_ols,
        c_stderr,
        c_hat_extended,
        residual_exponent,
        samples: fit_samples,
    })
}

/// Log-log OLS slope of -F against s; the cusp gap exponent is 8/3.
pub fn forrester_exponent(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 5 {
        return Err(Error::IllConditionedFit(format!(
            "need at least 5 samples, got {}",
            samples.len()
        )));
    }
    let lx: Vec<f64> = samples.iter().map(|(s, _)| s.ln()).collect();
    let ly: Vec<f64> = samples.iter().map(|(_, f)| (-f).ln()).collect();
    Ok(ols_slope(&lx, &ly))
}
