//! The three-sheeted surface behind the steepest-descent analysis: the root
//! eta of eta^2 + 2 z eta + 1 = 0 with arg eta in (0, pi), the solutions w_j
//! of w^3 - 3 w + 2 z = 0, the phase functions lambda_j, their expansion
//! constants, and sampled decay margins on the shifted rays.

use crate::error::{Error, Result};
use crate::pearcey_fn::PearceyParams;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sheet {
    One,
    Two,
    Three,
}

impl Sheet {
    pub fn index(&self) -> usize {
        match self {
            Sheet::One => 1,
            Sheet::Two => 2,
            Sheet::Three => 3,
        }
    }

    /// Whether z sits on this sheet's cut (real axis segments).
    fn on_cut(&self, z: Complex64) -> bool {
        if z.im != 0.0 {
            return false;
        }
        match self {
            Sheet::One => z.re.abs() > 1.0,
            Sheet::Two => z.re > 1.0,
            Sheet::Three => z.re < -1.0,
        }
    }
}

fn omega_pow(k: i32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0 * k as f64)
}

/// eta(z) = i (1 - z^2)^{1/2} - z with the principal square root. This
/// realization satisfies eta(0) = i, Im eta > 0 off the cuts, and both
/// large-z limits; it is validated by assertions rather than trusted.
pub fn eta(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re.abs() > 1.0 {
        return Err(Error::OnBranchCut("eta on (-inf,-1) or (1,inf)"));
    }
    let e = Complex64::new(0.0, 1.0) * (Complex64::new(1.0, 0.0) - z * z).sqrt() - z;
    debug_assert!(e.im >= -1e-14 * (1.0 + e.norm()));
    Ok(e)
}

/// w_j(z) = omega^{j-2} eta^{1/3} + omega^{2-j} eta^{-1/3}, principal cube root.
pub fn w(sheet: Sheet, z: Complex64) -> Result<Complex64> {
    if sheet.on_cut(z) {
        return Err(Error::OnBranchCut("w on its sheet cut"));
    }
    // the composed formula is continuous across the other sheet's cut, so a
    // one-sided eta evaluation suffices there
    let e = eta_one_sided(z);
    let j = sheet.index() as i32;
    let c = e.powf(1.0 / 3.0);
    Ok(omega_pow(j - 2) * c + omega_pow(2 - j) / c)
}

fn eta_one_sided(z: Complex64) -> Complex64 {
    let zz = if z.im == 0.0 && z.re.abs() > 1.0 {
        Complex64::new(z.re, 1e-300)
    } else {
        z
    };
    Complex64::new(0.0, 1.0) * (Complex64::new(1.0, 0.0) - zz * zz).sqrt() - zz
}

/// lambda_j = (3/4^{5/3}) w_j^4 + (rho/(2^{5/3} s^{2/3}) - 3/2^{4/3}) w_j^2.
pub fn lambda(sheet: Sheet, z: Complex64, s: f64, params: &PearceyParams) -> Result<Complex64> {
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("s = {s} must be > 0")));
    }
    let wj = w(sheet, z)?;
    let w2 = wj * wj;
    let coef =
        params.rho / (2.0_f64.powf(5.0 / 3.0) * s.powf(2.0 / 3.0)) - 3.0 / 2.0_f64.powf(4.0 / 3.0);
    Ok(3.0 / 4.0_f64.powf(5.0 / 3.0) * w2 * w2 + coef * w2)
}

/// The s -> infinity limit of lambda_j (the rho term dropped); used for the
/// sign charts of the decay inequalities.
pub fn lambda_star(sheet: Sheet, z: Complex64) -> Result<Complex64> {
    let wj = w(sheet, z)?;
    let w2 = wj * wj;
    Ok(3.0 / 4.0_f64.powf(5.0 / 3.0) * w2 * w2 - 3.0 / 2.0_f64.powf(4.0 / 3.0) * w2)
}

/// Scalar bundle for the expansions of lambda at -1 and infinity.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceConstants {
    pub d0: f64,
    pub d1: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

pub fn surface_constants(s: f64, params: &PearceyParams) -> SurfaceConstants {
    let rho = params.rho;
    let s23 = s.powf(2.0 / 3.0);
    SurfaceConstants {
        d0: 3.0 * 2.0_f64.powf(-7.0 / 3.0) - (2.0 * s).powf(-2.0 / 3.0) * rho,
        d1: 0.125 * (-2.0 + (2.0 / s).powf(2.0 / 3.0) * rho),
        c0: rho / (2.0_f64.powf(5.0 / 3.0) * s23) - 9.0 / 2.0_f64.powf(10.0 / 3.0),
        c1: 3.0_f64.sqrt() / 2.0_f64.powf(5.0 / 6.0)
            - rho / (3.0_f64.sqrt() * 2.0_f64.powf(1.0 / 6.0) * s23),
        c2: 2.0_f64.powf(2.0 / 3.0) / 3.0 + 2.0_f64.powf(1.0 / 3.0) * rho / (9.0 * s23),
        c3: 7.0 * rho / (108.0 * 3.0_f64.sqrt() * 2.0_f64.powf(1.0 / 6.0) * s23)
            - 165.0 / (108.0 * 3.0_f64.sqrt() * 2.0_f64.powf(5.0 / 6.0)),
    }
}

/// sum of the three lambda at any off-cut point (Vieta).
pub fn lambda_sum_closed(s: f64, params: &PearceyParams) -> f64 {
    -9.0 / 2.0_f64.powf(7.0 / 3.0)
        + 3.0 * params.rho / (2.0_f64.powf(2.0 / 3.0) * s.powf(2.0 / 3.0))
}

/// lambda_1 + lambda_3 - 2 lambda_2 at -1.
pub fn lambda123_at_minus_one_closed(s: f64, params: &PearceyParams) -> f64 {
    -9.0 / 2.0_f64.powf(7.0 / 3.0)
        - 3.0 * params.rho / (2.0_f64.powf(2.0 / 3.0) * s.powf(2.0 / 3.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesTarget {
    W,
    Lambda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionPoint {
    MinusOne,
    PlusOne,
    Infinity,
}

/// Residual magnitude and the empirical order of the first dropped term when
/// comparing direct evaluation with the truncated local/large-z series.
#[derive(Clone, Copy, Debug)]
pub struct SeriesCheckReport {
    pub max_residual: f64,
    pub empirical_order: f64,
}

fn w_series_near_one(sheet: Sheet, z: Complex64, at_minus: bool) -> Result<Complex64> {
    // near -1: w_{1,3} = -1 +- sqrt(2/3)(z+1)^{1/2} + (z+1)/9 +- 5/(54 sqrt6)(z+1)^{3/2}
    // near +1 the half-integer powers carry the half-plane sign +-i.
    let sq23 = (2.0_f64 / 3.0).sqrt();
    let c32 = 5.0 / (54.0 * 6.0_f64.sqrt());
    if at_minus {
        let u = z + 1.0;
        let sign = match sheet {
            Sheet::One => 1.0,
            Sheet::Three => -1.0,
            Sheet::Two => {
                return Err(Error::UnsupportedSeries(
                    "w_2 is analytic at -1; no series is stated".to_string(),
                ))
            }
        };
        Ok(-Complex64::new(1.0, 0.0) + sign * sq23 * u.sqrt() + u / 9.0 + sign * c32 * u.powf(1.5))
    } else {
        let u = z - 1.0;
        let upper = z.im > 0.0;
        let i = Complex64::new(0.0, 1.0);
        let pm = match (sheet, upper) {
            (Sheet::One, true) | (Sheet::Two, false) => i,
            (Sheet::One, false) | (Sheet::Two, true) => -i,
            (Sheet::Three, _) => {
                return Err(Error::UnsupportedSeries(
                    "w_3 is analytic at 1; no series is stated".to_string(),
                ))
            }
        };
        Ok(Complex64::new(1.0, 0.0) + pm * sq23 * u.sqrt() + u / 9.0 - pm * c32 * u.powf(1.5))
    }
}

fn w_series_infinity(sheet: Sheet, z: Complex64) -> Result<Complex64> {
    let c13 = 2.0_f64.powf(1.0 / 3.0);
    let t1 = z.powf(1.0 / 3.0);
    let (a, b) = match (sheet, z.im > 0.0) {
        (Sheet::One, true) => (omega_pow(2), omega_pow(1)),
        (Sheet::One, false) => (omega_pow(1), omega_pow(2)),
        (Sheet::Three, _) => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        (Sheet::Two, _) => {
            return Err(Error::UnsupportedSeries(
                "w_2 at infinity is not stated; use w_2(-z) = -w_3(z)".to_string(),
            ))
        }
    };
    let sign = match sheet {
        Sheet::One => -1.0,
        _ => -1.0,
    };
    Ok(sign
        * (c13 * a * t1 + b / c13 / t1 - a / (6.0 * 2.0_f64.powf(2.0 / 3.0)) * t1.powi(-5)
            + b / (12.0 * c13) * t1.powi(-7)
            - a / (18.0 * 4.0_f64.powf(1.0 / 3.0)) * t1.powi(-11)))
}

fn lambda_series_near(
    sheet: Sheet,
    z: Complex64,
    s: f64,
    params: &PearceyParams,
    at_minus: bool,
) -> Result<Complex64> {
    let k = surface_constants(s, params);
    let (c0, c1, c2, c3) = (k.c0, k.c1, k.c2, k.c3);
    if at_minus {
        let u = z + 1.0;
        let sign = match sheet {
            Sheet::One => 1.0,
            Sheet::Three => -1.0,
            Sheet::Two => {
                return Err(Error::UnsupportedSeries(
                    "lambda_2 is analytic at -1; no series is stated".to_string(),
                ))
            }
        };
        Ok(Complex64::new(c0, 0.0) + sign * c1 * u.sqrt() + c2 * u + sign * c3 * u.powf(1.5))
    } else {
        let u = z - 1.0;
        let upper = z.im > 0.0;
        let i = Complex64::new(0.0, 1.0);
        let pm = match (sheet, upper) {
            (Sheet::One, true) | (Sheet::Two, false) => -i,
            (Sheet::One, false) | (Sheet::Two, true) => i,
            (Sheet::Three, _) => {
                return Err(Error::UnsupportedSeries(
                    "lambda_3 is analytic at 1; no series is stated".to_string(),
                ))
            }
        };
        Ok(Complex64::new(c0, 0.0) + pm * c1 * u.sqrt() - c2 * u - pm * c3 * u.powf(1.5))
    }
}

fn lambda_series_infinity(
    sheet: Sheet,
    z: Complex64,
    s: f64,
    params: &PearceyParams,
) -> Result<Complex64> {
    let k = surface_constants(s, params);
    let rho = params.rho;
    let s23 = s.powf(2.0 / 3.0);
    let (a, b) = match (sheet, z.im > 0.0) {
        (Sheet::One, true) => (omega_pow(2), omega_pow(1)),
        (Sheet::One, false) => (omega_pow(1), omega_pow(2)),
        (Sheet::Three, _) => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        (Sheet::Two, _) => {
            return Err(Error::UnsupportedSeries(
                "lambda_2 at infinity is not stated; use lambda_2(-z) = lambda_3(z)".to_string(),
            ))
        }
    };
    Ok(
        0.75 * a * z.powf(4.0 / 3.0) + rho / (2.0 * s23) * b * z.powf(2.0 / 3.0) - k.d0
            + k.d1 * a * z.powf(-2.0 / 3.0),
    )
}

/// Compare direct evaluation with the stated-order truncated series at two
/// probe scales; report the worst residual and the empirical order of the
/// first dropped term.
pub fn series_check(
    target: SeriesTarget,
    point: ExpansionPoint,
    sheet: Sheet,
    s: f64,
    params: &PearceyParams,
) -> Result<SeriesCheckReport> {
    let direct = |z: Complex64| -> Result<Complex64> {
        match target {
            SeriesTarget::W => w(sheet, z),
            SeriesTarget::Lambda => lambda(sheet, z, s, params),
        }
    };
    let series = |z: Complex64| -> Result<Complex64> {
        match (target, point) {
            (SeriesTarget::W, ExpansionPoint::MinusOne) => w_series_near_one(sheet, z, true),
            (SeriesTarget::W, ExpansionPoint::PlusOne) => w_series_near_one(sheet, z, false),
            (SeriesTarget::W, ExpansionPoint::Infinity) => w_series_infinity(sheet, z),
            (SeriesTarget::Lambda, ExpansionPoint::MinusOne) => {
                lambda_series_near(sheet, z, s, params, true)
            }
            (SeriesTarget::Lambda, ExpansionPoint::PlusOne) => {
                lambda_series_near(sheet, z, s, params, false)
            }
            (SeriesTarget::Lambda, ExpansionPoint::Infinity) => {
                lambda_series_infinity(sheet, z, s, params)
            }
        }
    };
    // probes: two scales, a few phases inside the validity sector
    let (center, scales): (Complex64, [f64; 2]) = match point {
        ExpansionPoint::MinusOne => (Complex64::new(-1.0, 0.0), [1e-2, 1e-3]),
        ExpansionPoint::PlusOne => (Complex64::new(1.0, 0.0), [1e-2, 1e-3]),
        ExpansionPoint::Infinity => (Complex64::new(0.0, 0.0), [50.0, 100.0]),
    };
    let phases = [0.4, 1.6, 2.6, -0.9, -2.2];
    let mut max_residual: f64 = 0.0;
    let mut orders = Vec::new();
    for ph in phases {
        let mut resid = [0.0_f64; 2];
        for (k, sc) in scales.iter().enumerate() {
            let z = center + Complex64::from_polar(*sc, ph);
            let d = direct(z)?;
            let sr = series(z)?;
            resid[k] = (d - sr).norm();
            max_residual = max_residual.max(resid[k] / d.norm().max(1.0));
        }
        // empirical order of the first dropped term from the two scales;
        // at infinity residual ~ |z|^{-order}, at +-1 residual ~ |dz|^{order}
        let ratio = (resid[0] / resid[1]).ln();
        let span = (scales[0] / scales[1]).ln();
        let order = match point {
            ExpansionPoint::Infinity => -ratio / span,
            _ => ratio / span,
        };
        orders.push(order);
    }
    let mean_order = orders.iter().sum::<f64>() / orders.len() as f64;
    Ok(SeriesCheckReport {
        max_residual,
        empirical_order: mean_order.abs(),
    })
}

/// Recover the constant term -D0 of lambda at infinity via Richardson at
/// |z| in {50, 100}: the known growing terms and the D1 z^{-2/3} term are
/// subtracted, then the leftover u^2 = z^{-4/3} term is eliminated.
pub fn lambda_infinity_constant(sheet: Sheet, s: f64, params: &PearceyParams) -> Result<f64> {
    let k = surface_constants(s, params);
    let rho = params.rho;
    let s23 = s.powf(2.0 / 3.0);
    let g = |z: Complex64| -> Result<Complex64> {
        let (a, b) = match (sheet, z.im > 0.0) {
            (Sheet::One, true) => (omega_pow(2), omega_pow(1)),
            (Sheet::One, false) => (omega_pow(1), omega_pow(2)),
            (Sheet::Three, _) => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            (Sheet::Two, _) => {
                return Err(Error::UnsupportedSeries(
                    "lambda_2 at infinity is not stated".to_string(),
                ))
            }
        };
        Ok(lambda(sheet, z, s, params)?
            - 0.75 * a * z.powf(4.0 / 3.0)
            - rho / (2.0 * s23) * b * z.powf(2.0 / 3.0)
            - k.d1 * a * z.powf(-2.0 / 3.0))
    };
    let ph = 0.7;
    let z1 = Complex64::from_polar(50.0, ph);
    let z2 = Complex64::from_polar(100.0, ph);
    let g1 = g(z1)?;
    let g2 = g(z2)?;
    // g = -D0 + c2 u^2 + O(u^3), u = z^{-2/3}: eliminate the u^2 term
    let u1 = z1.powf(-4.0 / 3.0);
    let u2 = z2.powf(-4.0 / 3.0);
    let extrap = g2 - u2 * (g1 - g2) / (u1 - u2);
    Ok(extrap.re)
}

/// Re(lambda_a - lambda_b) and the |z|^{4/3}-normalized margin at z.
#[derive(Clone, Copy, Debug)]
pub struct DecayMargin {
    pub re_diff: f64,
    pub normalized: f64,
}

pub fn decay_margin(
    z: Complex64,
    pair: (Sheet, Sheet),
    s: f64,
    params: &PearceyParams,
) -> Result<DecayMargin> {
    let la = lambda(pair.0, z, s, params)?;
    let lb = lambda(pair.1, z, s, params)?;
    let re_diff = (la - lb).re;
    Ok(DecayMargin {
        re_diff,
        normalized: re_diff / z.norm().powf(4.0 / 3.0),
    })
}

/// One sign-chart sample: the signs of Re(lambda*_2 - lambda*_1),
/// Re(lambda*_3 - lambda*_1), Re(lambda*_2 - lambda*_3).
#[derive(Clone, Copy, Debug)]
pub struct ChartSample {
    pub x: f64,
    pub y: f64,
    pub sign_21: i8,
    pub sign_31: i8,
    pub sign_23: i8,
}

/// Points on the real cuts are sampled from the upper side (the library's
/// +1e-8 boundary convention).
pub fn sign_chart(
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<Vec<ChartSample>> {
    let mut out = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            let x = x_range.0 + (x_range.1 - x_range.0) * ix as f64 / (nx - 1).max(1) as f64;
            let y = y_range.0 + (y_range.1 - y_range.0) * iy as f64 / (ny - 1).max(1) as f64;
            let z = if y == 0.0 && x.abs() >= 1.0 {
                Complex64::new(x, 1e-8)
            } else {
                Complex64::new(x, y)
            };
            let l1 = lambda_star(Sheet::One, z)?;
            let l2 = lambda_star(Sheet::Two, z)?;
            let l3 = lambda_star(Sheet::Three, z)?;
            let sgn = |v: f64| -> i8 {
                if v > 0.0 {
                    1
                } else if v < 0.0 {
                    -1
                } else {
                    0
                }
            };
            out.push(ChartSample {
                x,
                y,
                sign_21: sgn((l2 - l1).re),
                sign_31: sgn((l3 - l1).re),
                sign_23: sgn((l2 - l3).re),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const P0: PearceyParams = PearceyParams { rho: 0.0 };
    const P1: PearceyParams = PearceyParams { rho: 1.0 };

    #[test]
    fn eta_basics() {
        assert!((eta(c(0.0, 0.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        let z = c(0.3, 0.2);
        let e = eta(z).unwrap();
        // quadratic relation and upper-half value
        assert!((e * e + 2.0 * z * e + 1.0).norm() < 1e-14);
        assert!(e.im > 0.0);
        // eta(z) eta(-z) = -1
        assert!((eta(z).unwrap() * eta(-z).unwrap() + 1.0).norm() < 1e-14);
        // large-z limit in the upper half plane
        let big = c(0.0, 40.0);
        assert!((eta(big).unwrap() + 1.0 / (2.0 * big)).norm() < 1e-4);
        assert!(eta(c(3.0, 0.0)).is_err());
    }

    #[test]
    fn w_table_values() {
        assert!(w(Sheet::One, c(0.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((w(Sheet::Two, c(0.0, 0.0)).unwrap() - 3.0_f64.sqrt()).norm() < 1e-14);
        assert!((w(Sheet::Three, c(0.0, 0.0)).unwrap() + 3.0_f64.sqrt()).norm() < 1e-14);
        assert!((w(Sheet::One, c(-1.0, 0.0)).unwrap() + 1.0).norm() < 1e-7);
        assert!((w(Sheet::One, c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-7);
    }

    #[test]
    fn w_algebra_and_symmetries() {
        for z in [c(0.37, 0.81), c(-0.4, -1.3), c(2.0, 0.5)] {
            let ws = [
                w(Sheet::One, z).unwrap(),
                w(Sheet::Two, z).unwrap(),
                w(Sheet::Three, z).unwrap(),
            ];
            for wj in ws {
                assert!((wj * wj * wj - 3.0 * wj + 2.0 * z).norm() < 1e-12);
            }
            // Vieta
            assert!((ws[0] + ws[1] + ws[2]).norm() < 1e-11);
            assert!((ws[0] * ws[1] + ws[0] * ws[2] + ws[1] * ws[2] + 3.0).norm() < 1e-11);
            assert!((ws[0] * ws[1] * ws[2] + 2.0 * z).norm() < 1e-11);
            // conjugation
            for sh in [Sheet::One, Sheet::Two, Sheet::Three] {
                let a = w(sh, z.conj()).unwrap();
                let b = w(sh, z).unwrap().conj();
                assert!((a - b).norm() < 1e-13);
            }
        }
        // oddness of w_1 and the cross relation w_2(-z) = -w_3(z)
        let z = c(0.4, 0.1);
        assert!((w(Sheet::One, -z).unwrap() + w(Sheet::One, z).unwrap()).norm() < 1e-13);
        assert!((w(Sheet::Two, -z).unwrap() + w(Sheet::Three, z).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn cut_continuations() {
        let eps = 1e-8;
        // w_{1,+} = w_{3,-} on (-inf, -1)
        let a = w(Sheet::One, c(-2.0, eps)).unwrap();
        let b = w(Sheet::Three, c(-2.0, -eps)).unwrap();
        assert!((a - b).norm() < 1e-6);
        // w_{1,+} = w_{2,-} on (1, inf)
        let a = w(Sheet::One, c(2.0, eps)).unwrap();
        let b = w(Sheet::Two, c(2.0, -eps)).unwrap();
        assert!((a - b).norm() < 1e-6);
        // lambda analogues
        let s = 2.0;
        let a = lambda(Sheet::One, c(-2.0, eps), s, &P1).unwrap();
        let b = lambda(Sheet::Three, c(-2.0, -eps), s, &P1).unwrap();
        assert!((a - b).norm() < 1e-6);
    }

    #[test]
    fn lambda_identities() {
        let (s, z) = (2.0, c(0.2, 0.3));
        let sum: Complex64 = [Sheet::One, Sheet::Two, Sheet::Three]
            .iter()
            .map(|&sh| lambda(sh, z, s, &P1).unwrap())
            .sum();
        assert!((sum.re - lambda_sum_closed(s, &P1)).abs() < 1e-12);
        assert!(sum.im.abs() < 1e-12);
        // lambda_1(-1) = C0
        let k = surface_constants(s, &P1);
        let l1 = lambda(Sheet::One, c(-1.0, 0.0), s, &P1).unwrap();
        assert!((l1.re - k.c0).abs() < 1e-10 && l1.im.abs() < 1e-10);
        // lambda_2(-z) = lambda_3(z)
        let a = lambda(Sheet::Two, c(-0.5, 0.0), s, &P1).unwrap();
        let b = lambda(Sheet::Three, c(0.5, 0.0), s, &P1).unwrap();
        assert!((a - b).norm() < 1e-13);
        // key exponent identity at -1
        let l3 = lambda(Sheet::Three, c(-1.0, 0.0), s, &P1).unwrap();
        let l2 = lambda(Sheet::Two, c(-1.0, 0.0), s, &P1).unwrap();
        let combo = (l1 + l3 - 2.0 * l2).re;
        assert!((combo - lambda123_at_minus_one_closed(s, &P1)).abs() < 1e-10);
    }

    #[test]
    fn constants_at_rho_zero() {
        let k = surface_constants(2.0, &P0);
        assert!((k.d1 + 0.25).abs() < 1e-15);
        assert!((k.c1 - 3.0_f64.sqrt() / 2.0_f64.powf(5.0 / 6.0)).abs() < 1e-15);
        assert!((k.c0 + 9.0 / 2.0_f64.powf(10.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn series_orders() {
        let s = 3.0;
        // w_1 near -1: next term order 2
        let r = series_check(
            SeriesTarget::W,
            ExpansionPoint::MinusOne,
            Sheet::One,
            s,
            &P1,
        )
        .unwrap();
        assert!((r.empirical_order - 2.0).abs() < 0.2, "{:?}", r);
        // w_2 near +1 branch signs
        let r = series_check(SeriesTarget::W, ExpansionPoint::PlusOne, Sheet::Two, s, &P1).unwrap();
        assert!((r.empirical_order - 2.0).abs() < 0.2, "{:?}", r);
        assert!(r.max_residual < 1e-4);
        // lambda_3 at infinity: dropped term order 4/3
        let r = series_check(
            SeriesTarget::Lambda,
            ExpansionPoint::Infinity,
            Sheet::Three,
            s,
            &P1,
        )
        .unwrap();
        assert!((r.empirical_order - 4.0 / 3.0).abs() < 0.2, "{:?}", r);
        // unsupported combinations are explicit errors
        assert!(series_check(
            SeriesTarget::W,
            ExpansionPoint::MinusOne,
            Sheet::Two,
            s,
            &P1
        )
        .is_err());
    }

    #[test]
    fn lambda_infinity_constant_matches_d0() {
        let s = 2.0;
        let k = surface_constants(s, &P1);
        let v = lambda_infinity_constant(Sheet::Three, s, &P1).unwrap();
        assert!((v + k.d0).abs() < 1e-6, "{v} vs {}", -k.d0);
    }

    #[test]
    fn sampled_decay_margins() {
        let s = 10.0;
        // z on Sigma_1^{(1)}: 1 + 2 e^{i pi/4}
        let z = c(1.0, 0.0) + Complex64::from_polar(2.0, PI / 4.0);
        let m = decay_margin(z, (Sheet::Two, Sheet::One), s, &P0).unwrap();
        assert!(m.normalized < -0.05, "{:?}", m);
        // z on Sigma_2^{(1)}: -1 + 2 e^{3 i pi/4}
        let z = c(-1.0, 0.0) + Complex64::from_polar(2.0, 3.0 * PI / 4.0);
        let m = decay_margin(z, (Sheet::Three, Sheet::One), s, &P0).unwrap();
        assert!(m.re_diff < 0.0);
        // lambda_2 - lambda_3 on Sigma_1^{(1)} at several radii
        for r in [0.5, 2.0, 5.0, 12.0, 20.0] {
            let z = c(1.0, 0.0) + Complex64::from_polar(r, PI / 4.0);
            let m = decay_margin(z, (Sheet::Two, Sheet::Three), s, &P0).unwrap();
            assert!(m.re_diff < 0.0, "r = {r}: {:?}", m);
        }
    }

    #[test]
    fn chart_signs_and_symmetries() {
        let grid = sign_chart((-3.0, 3.0), (-3.0, 3.0), 13, 13).unwrap();
        // sign of Re(lambda*_2 - lambda*_1) at 2 + 2i is negative
        let p = grid
            .iter()
            .find(|g| (g.x - 2.0).abs() < 1e-9 && (g.y - 2.0).abs() < 1e-9)
            .unwrap();
        assert_eq!(p.sign_21, -1);
        // symmetric under y -> -y; x -> -x swaps the 2,1 and 3,1 patterns
        for g in &grid {
            let mirror = grid
                .iter()
                .find(|h| (h.x - g.x).abs() < 1e-9 && (h.y + g.y).abs() < 1e-9)
                .unwrap();
            assert_eq!(g.sign_21, mirror.sign_21);
            assert_eq!(g.sign_31, mirror.sign_31);
            let flip = grid
                .iter()
                .find(|h| (h.x + g.x).abs() < 1e-9 && (h.y - g.y).abs() < 1e-9)
                .unwrap();
            assert_eq!(g.sign_21, flip.sign_31);
        }
    }
}
