//! Local and global parametrices: the Bessel model problem, the global
//! matrix N(z), the conformal maps to the Bessel variable, the analytic
//! prefactor E(z), the correction matrices J_1 at the disk boundaries, and
//! the Laurent data feeding R_1.

use crate::bessel::modified_bessel;
use crate::cmatrix::{Matrix2, Matrix3, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::pearcey_fn::PearceyParams;
use crate::surface::{lambda, Sheet};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default radius of the local disks U(+-1, delta).
pub const DISK_RADIUS: f64 = 1.0 / 3.0;

/// Imaginary nudge used to evaluate boundary values on the real cuts from above.
const CUT_NUDGE: f64 = 1e-30;

fn nudge(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re.abs() >= 1.0 {
        Complex64::new(z.re, CUT_NUDGE)
    } else {
        z
    }
}

// ---------------------------------------------------------------------------
// Bessel parametrix
// ---------------------------------------------------------------------------

/// Sector-wise 2x2 Bessel parametrix Phi_alpha at z (principal z^{1/2}):
/// region I: |arg z| < 2pi/3, II: above the 2pi/3 ray, III: below.
pub fn phi_bessel(alpha: f64, z: Complex64) -> Result<Matrix2> {
    let a = z.arg();
    if z.norm() == 0.0
        || (a - 2.0 * PI / 3.0).abs() < 1e-14
        || (a + 2.0 * PI / 3.0).abs() < 1e-14
        || (z.im == 0.0 && z.re < 0.0)
    {
        return Err(Error::AmbiguousSector(a));
    }
    let u = z.sqrt();
    let b = modified_bessel(alpha, u)?;
    let base = Matrix2([
        [b.i_val, I / PI * b.k_val],
        [PI * I * u * b.di_val, -u * b.dk_val],
    ]);
    let e_api = Complex64::from_polar(1.0, alpha * PI);
    Ok(if a.abs() < 2.0 * PI / 3.0 {
        base
    } else if a > 0.0 {
        base.mul(&Matrix2([[ONE, ZERO], [-e_api, ONE]]))
    } else {
        base.mul(&Matrix2([[ONE, ZERO], [e_api.inv(), ONE]]))
    })
}

/// d/dz of the alpha = 0 parametrix, from the Bessel equation
/// (used by the limit checks of the script factors).
pub fn phi_bessel_derivative(z: Complex64) -> Result<Matrix2> {
    let a = z.arg();
    if z.norm() == 0.0 || (z.im == 0.0 && z.re < 0.0) {
        return Err(Error::AmbiguousSector(a));
    }
    let u = z.sqrt();
    let b = modified_bessel(0.0, u)?;
    // d/dz I0(sqrt z) = I0'(u)/(2u); d/dz [pi i u I0'(u)] = (pi i/2) I0(u); etc.
    let base = Matrix2([
        [b.di_val / (2.0 * u), I / PI * b.dk_val / (2.0 * u)],
        [PI * I / 2.0 * b.i_val, -b.k_val / 2.0],
    ]);
    let e_api = ONE;
    Ok(if a.abs() < 2.0 * PI / 3.0 {
        base
    } else if a > 0.0 {
        base.mul(&Matrix2([[ONE, ZERO], [-e_api, ONE]]))
    } else {
        base.mul(&Matrix2([[ONE, ZERO], [e_api, ONE]]))
    })
}

// ---------------------------------------------------------------------------
// global parametrix
// ---------------------------------------------------------------------------

/// Constant matrices of the global parametrix.
#[derive(Clone, Copy, Debug)]
pub struct GlobalConstants {
    pub n0: Matrix3,
    pub lam: Matrix3,
    pub ups: Matrix3,
    /// 1/z coefficient of N at infinity
    pub n1: Matrix3,
}

impl GlobalConstants {
    pub fn new() -> Self {
        let s2i = 2.0_f64.sqrt() * I;
        let d = Matrix3::diag(
            Complex64::new(4.0 / 2.0_f64.powf(1.0 / 6.0), 0.0),
            Complex64::new(6.0_f64.sqrt(), 0.0),
            Complex64::new(3.0 * 2.0_f64.powf(1.0 / 6.0), 0.0),
        );
        let core = Matrix3([
            [s2i, ONE, -ONE],
            [ZERO, 2.0 * ONE, 2.0 * ONE],
            [-s2i, ONE, -ONE],
        ]);
        let n0 = d.mul(&core).scale(Complex64::new(0.25, 0.0));
        let lam = Matrix3::from_real([[-1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]);
        let ups = n0.mul(&lam).mul(&n0.inverse().expect("N0 invertible"));
        let c = 2.0_f64.powf(-5.0 / 3.0);
        let e = 5.0 / (16.0 * 2.0_f64.powf(1.0 / 3.0));
        let n1 = Matrix3::from_real([[0.0, -c, 0.0], [-e, 0.0, c], [0.0, e, 0.0]]);
        GlobalConstants { n0, lam, ups, n1 }
    }
}

impl Default for GlobalConstants {
    fn default() -> Self {
        Self::new()
    }
}

fn global_constants() -> &'static GlobalConstants {
    static CACHE: std::sync::OnceLock<GlobalConstants> = std::sync::OnceLock::new();
    CACHE.get_or_init(GlobalConstants::new)
}

fn omega_pow(k: i32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0 * k as f64)
}

fn eta_one_sided(z: Complex64) -> Complex64 {
    I * (ONE - z * z).sqrt() - z
}

fn w_j(j: i32, z: Complex64) -> Complex64 {
    let e = eta_one_sided(z);
    let c = e.powf(1.0 / 3.0);
    omega_pow(j - 2) * c + omega_pow(2 - j) / c
}

/// sqrt(1 - w^2) with the cut along the lower images gamma_1^-, gamma_2^- of
/// the Riemann-surface cuts. The branch is the continuation from w = 0
/// (value 1). Locally: the principal square root needs a sign flip exactly
/// in the two lower slivers between the real rays |Re w| > 1 and the gamma^-
/// curves, characterized by Im w < 0 and Im((3w - w^3)/2) > 0.
///
/// For w = w_j(z) the cubic (3w - w^3)/2 maps back to z, so `upper_z` is the
/// authoritative side when the recomputed imaginary part would be rounding
/// noise (boundary values on the real cuts arrive through tiny nudges).
pub fn sqrt_one_minus_w2_sided(w: Complex64, upper_z: bool) -> Complex64 {
    let near_axis = w.im.abs() < 1e-12 * w.re.abs().max(1.0);
    if near_axis {
        // the real w-axis is not a cut of this square root; the value on the
        // rays beyond +-1 is -i sgn(w) sqrt(w^2 - 1) from either side
        let wr = w.re;
        if wr.abs() <= 1.0 {
            return Complex64::new((1.0 - wr * wr).max(0.0).sqrt(), 0.0);
        }
        return -I * wr.signum() * (wr * wr - 1.0).sqrt();
    }
    let x = (3.0 * w - w * w * w) / 2.0;
    let x_upper = if x.im.abs() < 1e-12 * x.re.abs().max(1.0) {
        upper_z
    } else {
        x.im > 0.0
    };
    let sign = if w.im < 0.0 && x_upper { -1.0 } else { 1.0 };
    sign * (ONE - w * w).sqrt()
}

/// One-argument form with the library's upper-side boundary convention.
pub fn sqrt_one_minus_w2(w: Complex64) -> Complex64 {
    sqrt_one_minus_w2_sided(w, true)
}

fn n_column(w: Complex64, upper_z: bool) -> [Complex64; 3] {
    let r = sqrt_one_minus_w2_sided(w, upper_z);
    let s3 = 3.0_f64.sqrt();
    [
        (ONE - w * w / 3.0) / r,
        -I / 6.0_f64.sqrt() * (w - w * w / s3) / r,
        -I / 6.0_f64.sqrt() * (w + w * w / s3) / r,
    ]
}

/// The global parametrix N(z), analytic off (-inf,-1] u [1,inf).
pub fn global_n(z: Complex64) -> Result<Matrix3> {
    if z.im == 0.0 && z.re.abs() >= 1.0 {
        return Err(Error::OnBranchCut("N on (-inf,-1] u [1,inf)"));
    }
    let gc = global_constants();
    let up = z.im > 0.0;
    let m = Matrix3::from_columns(
        n_column(w_j(1, z), up),
        n_column(w_j(3, z), up),
        n_column(w_j(2, z), up),
    );
    Ok(gc.n0.mul(&m).mul(&gc.lam))
}

fn global_n_nudged(z: Complex64) -> Result<Matrix3> {
    global_n(nudge(z))
}

// ---------------------------------------------------------------------------
// conformal maps and prefactor
// ---------------------------------------------------------------------------

fn check_disk(z: Complex64, center: f64, delta: f64) -> Result<()> {
    if (z - center).norm() > delta + 1e-9 {
        return Err(Error::OutsideDisk { center, delta });
    }
    Ok(())
}

fn lambda_nudged(sheet: Sheet, z: Complex64, s: f64, params: &PearceyParams) -> Result<Complex64> {
    lambda(sheet, nudge(z), s, params)
}

/// f(z) = (lambda_1(z) - lambda_3(z))^2 / 4, analytic in U(-1, delta).
pub fn conformal_f(z: Complex64, s: f64, params: &PearceyParams) -> Result<Complex64> {
    check_disk(z, -1.0, DISK_RADIUS)?;
    let l1 = lambda_nudged(Sheet::One, z, s, params)?;
    let l3 = lambda_nudged(Sheet::Three, z, s, params)?;
    let d = l1 - l3;
    Ok(d * d / 4.0)
}

/// f~(z) = (lambda_1(z) - lambda_2(z))^2 / 4 = f(-z), analytic in U(1, delta).
pub fn conformal_f_tilde(z: Complex64, s: f64, params: &PearceyParams) -> Result<Complex64> {
    check_disk(z, 1.0, DISK_RADIUS)?;
    let l1 = lambda_nudged(Sheet::One, z, s, params)?;
    let l2 = lambda_nudged(Sheet::Two, z, s, params)?;
    let d = l1 - l2;
    Ok(d * d / 4.0)
}

/// `E(z) = (1/sqrt2) N(z) [[1,0,-i],[0,sqrt2,0],[-i,0,1]]`
///        diag(sqrt(pi) s^{2/3} f^{1/4}, 1, f^{-1/4}/(sqrt(pi) s^{2/3})),
/// analytic in the whole disk U(-1, delta) including across (-1-delta, -1).
pub fn prefactor_e(z: Complex64, s: f64, params: &PearceyParams) -> Result<Matrix3> {
    check_disk(z, -1.0, DISK_RADIUS)?;
    let f = conformal_f(z, s, params)?;
    let n = global_n_nudged(z)?;
    let mixer = Matrix3([
        [ONE, ZERO, -I],
        [ZERO, 2.0_f64.sqrt() * ONE, ZERO],
        [-I, ZERO, ONE],
    ])
    .scale(Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0));
    let f4 = quarter_root_upper(f, z);
    let c = PI.sqrt() * s.powf(2.0 / 3.0);
    let d = Matrix3::diag(c * f4, ONE, (c * f4).inv());
    Ok(n.mul(&mixer).mul(&d))
}

/// f^{1/4} consistent with the upper-side evaluation of N on (-1-delta, -1):
/// for arg f near +-pi the value from the positive-imaginary side is used when
/// z carries the cut nudge.
fn quarter_root_upper(f: Complex64, z: Complex64) -> Complex64 {
    let mut f = f;
    if f.im == 0.0 && f.re < 0.0 {
        // boundary limit: pick the side matching the upper z-limit
        f = Complex64::new(f.re, if z.im >= 0.0 { 1e-300 } else { -1e-300 });
    }
    f.powf(0.25)
}

// ---------------------------------------------------------------------------
// local parametrices
// ---------------------------------------------------------------------------

/// Embed a 2x2 matrix into the (1,3) block of a 3x3 identity.
pub fn embed_13(b: &Matrix2) -> Matrix3 {
    let mut m = Matrix3::identity();
    m.0[0][0] = b.0[0][0];
    m.0[0][2] = b.0[0][1];
    m.0[2][0] = b.0[1][0];
    m.0[2][2] = b.0[1][1];
    m
}

/// The Bessel-model local parametrix P^{(-1)} on U(-1, delta) (sign = -1),
/// or P^{(1)} = Upsilon P^{(-1)}(-z) Lambda on U(1, delta) (sign = +1).
pub fn local_p(sign: i32, z: Complex64, s: f64, params: &PearceyParams) -> Result<Matrix3> {
    match sign {
        -1 => local_p_minus(z, s, params),
        1 => {
            let gc = global_constants();
            Ok(gc.ups.mul(&local_p_minus(-z, s, params)?).mul(&gc.lam))
        }
        _ => Err(Error::InvalidParameter(format!(
            "local parametrix sign must be +-1, got {sign}"
        ))),
    }
}

fn local_p_minus(z: Complex64, s: f64, params: &PearceyParams) -> Result<Matrix3> {
    check_disk(z, -1.0, DISK_RADIUS)?;
    let f = conformal_f(z, s, params)?;
    let s43 = s.powf(4.0 / 3.0);
    let zeta = s.powf(8.0 / 3.0) * f;
    let phi = phi_bessel(0.0, zeta)?;
    let b = embed_13(&phi);
    let l1 = lambda_nudged(Sheet::One, z, s, params)?;
    let l2 = lambda_nudged(Sheet::Two, z, s, params)?;
    let l3 = lambda_nudged(Sheet::Three, z, s, params)?;
    let d = Matrix3::diag(
        (s43 / 2.0 * (l3 - l1)).exp(),
        ONE,
        (s43 / 2.0 * (l1 - l3)).exp(),
    );
    let argf = zeta.arg().abs();
    if (argf - 3.0 * PI / 4.0).abs() < 1e-14 {
        return Err(Error::AmbiguousSector(zeta.arg()));
    }
    let mut tri = Matrix3::identity();
    if argf < 3.0 * PI / 4.0 {
        tri.0[2][1] = (s43 * (l3 - l2)).exp();
    }
    Ok(prefactor_e(z, s, params)?.mul(&b).mul(&d).mul(&tri))
}

// ---------------------------------------------------------------------------
// correction matrices and Laurent data
// ---------------------------------------------------------------------------

/// `J_1^{(-1)}(z) = (1/(8 f^{1/2})) N [[-1,0,-2i],[0,0,0],[-2i,0,1]] N^{-1}`:
/// the coefficient of s^{-4/3} in P^{(-1)} N^{-1} on the disk boundary.
pub fn j1_minus(z: Complex64, s: f64, params: &PearceyParams) -> Result<Matrix3> {
    check_disk(z, -1.0, DISK_RADIUS)?;
    let f = conformal_f(z, s, params)?;
    let n = global_n_nudged(z)?;
    let core = Matrix3([
        [-ONE, ZERO, -2.0 * I],
        [ZERO, ZERO, ZERO],
        [-2.0 * I, ZERO, ONE],
    ]);
    let fs = quarter_root_upper(f, z);
    let sqrt_f = fs * fs;
    Ok(n.mul(&core).mul(&n.inverse()?).scale((8.0 * sqrt_f).inv()))
}

/// The correction pair at mirrored points of the two disks: for z in either
/// punctured disk, returns (J_1^{(-1)}(zm), J_1^{(1)}(-zm)) where zm is the
/// U(-1, delta) representative of z. The second entry uses the symmetry
/// J_1^{(1)}(w) = Upsilon J_1^{(-1)}(-w) Upsilon.
pub fn j1_matrices(z: Complex64, s: f64, params: &PearceyParams) -> Result<(Matrix3, Matrix3)> {
    let gc = global_constants();
    let zm = if z.re <= 0.0 { z } else { -z };
    let jm = j1_minus(zm, s, params)?;
    let jp = gc.ups.mul(&jm).mul(&gc.ups);
    Ok((jm, jp))
}

/// Laurent coefficient a_k of a matrix function about `center`, trapezoid rule
/// on |z - center| = radius with n nodes (angles offset off the real axis).
pub fn cauchy_coeff(
    func: &mut dyn FnMut(Complex64) -> Result<Matrix3>,
    center: Complex64,
    radius: f64,
    k: i32,
    n: usize,
) -> Result<Matrix3> {
    let mut acc = Matrix3::zeros();
    for j in 0..n {
        let th = (j as f64 + 0.5) * 2.0 * PI / n as f64;
        let offset = Complex64::from_polar(radius, th);
        let v = func(center + offset)?;
        let w = offset.powi(-k);
        acc = acc.add(&v.scale(w));
    }
    Ok(acc.scale(Complex64::new(1.0 / n as f64, 0.0)))
}

/// Residues and Laurent data of the rank-one correction, and the resulting
/// R_1 evaluator.
#[derive(Clone, Debug)]
pub struct R1Data {
    pub s: f64,
    pub params: PearceyParams,
    /// Res_{-1} J_1^{(-1)}
    pub res_minus: Matrix3,
    /// Res_{+1} J_1^{(1)} = -Upsilon Res_{-1} Upsilon
    pub res_plus: Matrix3,
    /// J_0 and J_1 Laurent coefficients of J_1^{(-1)} about -1
    pub laurent_j0: Matrix3,
    pub laurent_j1: Matrix3,
    /// R_1'(-1) = -J_1 - (1/4) Res_{+1}
    pub r1_prime_at_minus_one: Matrix3,
    /// leading 1/z coefficient: (Res_{-1} + Res_{+1}) = J_{-1} - Ups J_{-1} Ups,
    /// to be divided by s^{4/3} for the R expansion
    pub r1_coeff: Matrix3,
}

/// Contour radius and node count for the Laurent integrals.
pub const LAURENT_RADIUS: f64 = 0.05;
pub const LAURENT_NODES: usize = 64;

pub fn r1_data(s: f64, params: &PearceyParams) -> Result<R1Data> {
    let gc = global_constants();
    let center = Complex64::new(-1.0, 0.0);
    let mut f = |z: Complex64| j1_minus(z, s, params);
    let res_minus = cauchy_coeff(&mut f, center, LAURENT_RADIUS, -1, LAURENT_NODES)?;
    let laurent_j0 = cauchy_coeff(&mut f, center, LAURENT_RADIUS, 0, LAURENT_NODES)?;
    let laurent_j1 = cauchy_coeff(&mut f, center, LAURENT_RADIUS, 1, LAURENT_NODES)?;
    let res_plus = gc.ups.mul(&res_minus).mul(&gc.ups).scale(-ONE);
    let r1_prime_at_minus_one = laurent_j1.scale(-ONE).sub(&res_plus.scale(0.25 * ONE));
    let r1_coeff = res_minus.add(&res_plus);
    Ok(R1Data {
        s,
        params: *params,
        res_minus,
        res_plus,
        laurent_j0,
        laurent_j1,
        r1_prime_at_minus_one,
        r1_coeff,
    })
}

impl R1Data {
    /// The explicit solution of the additive jump problem:
    /// residue terms everywhere, minus J_1^{(+-1)}(z) inside the disks.
    pub fn r1(&self, z: Complex64) -> Result<Matrix3> {
        let pole_m = self.res_minus.scale((z + 1.0).inv());
        let pole_p = self.res_plus.scale((z - 1.0).inv());
        let mut out = pole_m.add(&pole_p);
        if (z + 1.0).norm() < DISK_RADIUS {
            out = out.sub(&j1_minus(z, self.s, &self.params)?);
        } else if (z - 1.0).norm() < DISK_RADIUS {
            let gc = global_constants();
            let jp = gc
                .ups
                .mul(&j1_minus(-z, self.s, &self.params)?)
                .mul(&gc.ups);
            out = out.sub(&jp);
        }
        Ok(out)
    }
}

/// Prefactor-free exponential factor of the T-to-Bessel factorization,
/// represented as e^{log_scale} * mat to keep large s representable.
#[derive(Clone, Copy, Debug)]
pub struct ScaledMatrix3 {
    pub log_scale: Complex64,
    pub mat: Matrix3,
}

impl ScaledMatrix3 {
    pub fn dense(&self) -> Matrix3 {
        self.mat.scale(self.log_scale.exp())
    }
}

/// The factor matrices of the derivative identity at -1:
/// script A (diagonal/subdiagonal exponentials of the lambda) log-scaled,
/// and script B (the 3x3 Bessel embedding at s^{8/3} f(z)).
pub fn script_factors(
    z: Complex64,
    s: f64,
    params: &PearceyParams,
) -> Result<(ScaledMatrix3, Matrix3)> {
    check_disk(z, -1.0, DISK_RADIUS)?;
    let f = conformal_f(z, s, params)?;
    if (f.arg().abs() - 3.0 * PI / 4.0).abs() < 1e-14 {
        return Err(Error::AmbiguousSector(f.arg()));
    }
    let s43 = s.powf(4.0 / 3.0);
    let l1 = lambda_nudged(Sheet::One, z, s, params)?;
    let l2 = lambda_nudged(Sheet::Two, z, s, params)?;
    let l3 = lambda_nudged(Sheet::Three, z, s, params)?;
    let a = s43 / 2.0 * (l1 + l3);
    let b = s43 * l2;
    let mut mat = Matrix3::zeros();
    mat.0[0][0] = ONE;
    mat.0[1][1] = (b - a).exp();
    mat.0[2][1] = ONE;
    mat.0[2][2] = ONE;
    let script_a = ScaledMatrix3 { log_scale: a, mat };
    let phi = phi_bessel(0.0, s.powf(8.0 / 3.0) * f)?;
    Ok((script_a, embed_13(&phi)))
}

/// (B^{-1}(zeta) B'(zeta))_{31} for the alpha = 0 embedding; tends to pi i/2
/// as zeta -> 0.
pub fn script_b_logderiv_31(zeta: Complex64) -> Result<Complex64> {
    let phi = phi_bessel(0.0, zeta)?;
    let dphi = phi_bessel_derivative(zeta)?;
    // row 3 of B^{-1} = (-phi_21, 0, phi_11); column 1 of B' = (dphi_11, 0, dphi_21)
    Ok(-phi.0[1][0] * dphi.0[0][0] + phi.0[0][0] * dphi.0[1][0])
}

/// Local frame bundling the conformal maps, prefactor, and correction data
/// for one value of (s, rho).
pub struct LocalFrame {
    pub s: f64,
    pub params: PearceyParams,
    pub r1: R1Data,
}

impl LocalFrame {
    pub fn new(s: f64, params: PearceyParams) -> Result<Self> {
        Ok(LocalFrame {
            s,
            params,
            r1: r1_data(s, &params)?,
        })
    }

    pub fn f(&self, z: Complex64) -> Result<Complex64> {
        conformal_f(z, self.s, &self.params)
    }

    pub fn f_tilde(&self, z: Complex64) -> Result<Complex64> {
        conformal_f_tilde(z, self.s, &self.params)
    }

    pub fn e_matrix(&self, z: Complex64) -> Result<Matrix3> {
        prefactor_e(z, self.s, &self.params)
    }

    pub fn j1_minus(&self, z: Complex64) -> Result<Matrix3> {
        j1_minus(z, self.s, &self.params)
    }

    pub fn j1_plus(&self, z: Complex64) -> Result<Matrix3> {
        Ok(j1_matrices(z, self.s, &self.params)?.1)
    }
}

/// Matrix value of E at -1 and E' at -1 by Cauchy integrals on a small circle
/// (spectrally accurate; E is analytic on the disk).
pub fn e_at_minus_one(s: f64, params: &PearceyParams) -> Result<(Matrix3, Matrix3)> {
    let mut f = |z: Complex64| prefactor_e(z, s, params);
    let center = Complex64::new(-1.0, 0.0);
    let e0 = cauchy_coeff(&mut f, center, LAURENT_RADIUS, 0, LAURENT_NODES)?;
    let e1 = cauchy_coeff(&mut f, center, LAURENT_RADIUS, 1, LAURENT_NODES)?;
    Ok((e0, e1))
}
