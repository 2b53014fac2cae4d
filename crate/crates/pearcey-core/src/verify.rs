//! Named property-check suites behind the `verify` command and the
//! acceptance tests. Each check reports its residual against a pinned
//! tolerance; `tol_scale` tightens or relaxes all tolerances at once.

use crate::asymptotics::{self, ols_slope};
use crate::cmatrix::{Matrix2, Matrix3, I, ONE, ZERO};
use crate::error::Result;
use crate::fredholm;
use crate::kernel;
use crate::parametrix::{self, GlobalConstants, DISK_RADIUS};
use crate::pearcey_fn::{self, PearceyParams};
use crate::surface::{self, ExpansionPoint, SeriesTarget, Sheet};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(suite: &'static str, name: &str, residual: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        suite,
        name: name.to_string(),
        residual,
        tolerance,
        pass: residual.is_finite() && residual <= tolerance,
    }
}

pub const SUITES: [&str; 6] = [
    "pearcey",
    "kernel",
    "fredholm",
    "surface",
    "parametrix",
    "asymptotics",
];

/// Run one suite; tolerances are multiplied by `tol_scale`.
pub fn run_suite(suite: &str, tol_scale: f64) -> Result<Vec<CheckResult>> {
    match suite {
        "pearcey" => pearcey_suite(tol_scale),
        "kernel" => kernel_suite(tol_scale),
        "fredholm" => fredholm_suite(tol_scale),
        "surface" => surface_suite(tol_scale),
        "parametrix" => parametrix_suite(tol_scale),
        "asymptotics" => asymptotics_suite(tol_scale),
        other => Err(crate::error::Error::InvalidParameter(format!(
            "unknown suite '{other}'; expected one of {SUITES:?}"
        ))),
    }
}

pub fn run_all(tol_scale: f64, only: Option<&str>) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for s in SUITES {
        if let Some(filter) = only {
            if s != filter {
                continue;
            }
        }
        out.extend(run_suite(s, tol_scale)?);
    }
    if out.is_empty() {
        return Err(crate::error::Error::InvalidParameter(format!(
            "no suite matched filter {only:?}"
        )));
    }
    Ok(out)
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------

fn pearcey_suite(ts: f64) -> Result<Vec<CheckResult>> {
    const S: &str = "pearcey";
    let mut out = Vec::new();

    // ODE residuals over a sample of |z| <= 10, |rho| <= 4
    let mut worst: f64 = 0.0;
    for rho in [-4.0, -1.5, 0.0, 2.0, 4.0] {
        let params = PearceyParams { rho };
        for j in 0..6 {
            for z in [c64(0.3, 0.1), c64(3.0, -2.0), c64(-7.0, 4.0), c64(9.5, 1.5)] {
                let r = pearcey_fn::ode_residual(j, z, &params)?;
                let t = pearcey_fn::pearcey_p(j, z, &params)?;
                worst = worst.max(r.norm() / (1.0 + t.p.norm()));
            }
        }
    }
    out.push(check(S, "ode-residual |z|<=10 |rho|<=4", worst, 1e-8 * ts));

    // evenness of p0, oddness of q
    let params = PearceyParams { rho: 1.0 };
    let pa = pearcey_fn::pearcey_p(0, c64(-2.0, 0.0), &params)?;
    let pb = pearcey_fn::pearcey_p(0, c64(2.0, 0.0), &params)?;
    out.push(check(S, "p0 evenness", (pa.p - pb.p).norm(), 1e-12 * ts));
    let qa = pearcey_fn::pearcey_q(c64(-1.3, 0.0), &params)?;
    let qb = pearcey_fn::pearcey_q(c64(1.3, 0.0), &params)?;
    out.push(check(
        S,
        "q oddness under y -> -y",
        (qa.p + qb.p).norm() / (1.0 + qa.p.norm()),
        1e-12 * ts,
    ));

    // six jump relations, 3 points per ray
    let dirs = [
        c64(1.0, 0.0),
        Complex64::from_polar(1.0, PI / 4.0),
        Complex64::from_polar(1.0, 3.0 * PI / 4.0),
        c64(-1.0, 0.0),
        Complex64::from_polar(1.0, -3.0 * PI / 4.0),
        Complex64::from_polar(1.0, -PI / 4.0),
    ];
    let mut worst: f64 = 0.0;
    for k in 0..6 {
        let j = pearcey_fn::jump_matrix(k)?;
        let (plus, minus) = pearcey_fn::ray_sides(k)?;
        for r in [0.7, 2.0, 4.0] {
            let z = dirs[k] * r;
            let pp = pearcey_fn::psi_sector_region(plus, z, &params)?.m;
            let pm = pearcey_fn::psi_sector_region(minus, z, &params)?.m;
            worst = worst.max(pp.sub(&pm.mul(&j)).max_abs() / pp.max_abs().max(1.0));
        }
    }
    out.push(check(S, "sector jumps (six rays)", worst, 1e-8 * ts));

    // Wronskian z-independence and rho-derivative
    let d0 = pearcey_fn::psi_tilde(ZERO, &params)?.m.det();
    let d2 = pearcey_fn::psi_tilde(c64(2.0, 0.0), &params)?.m.det();
    out.push(check(
        S,
        "wronskian z-independence",
        (d0 - d2).norm() / d0.norm(),
        1e-9 * ts,
    ));
    let h = 1e-4;
    let dp = pearcey_fn::psi_tilde(c64(0.3, 0.0), &PearceyParams { rho: 0.8 + h })?
        .m
        .det();
    let dm = pearcey_fn::psi_tilde(c64(0.3, 0.0), &PearceyParams { rho: 0.8 - h })?
        .m
        .det();
    let fd = (dp.ln() - dm.ln()) / (2.0 * h);
    out.push(check(
        S,
        "d/drho ln det = rho",
        (fd - c64(0.8, 0.0)).norm(),
        1e-6 * ts,
    ));

    // asymptotic error slope -2 +- 0.3 (rho = 2, rays where the stated
    // z^{-2} correction dominates)
    let p2 = PearceyParams { rho: 2.0 };
    for (j, ang) in [(0usize, 1.35), (1, -1.35), (4, 0.25)] {
        let mut lx = Vec::new();
        let mut ly = Vec::new();
        for r in [15.0, 20.0, 30.0, 45.0, 60.0] {
            let z = Complex64::from_polar(r, ang);
            let q = pearcey_fn::pearcey_p(j, z, &p2)?.p;
            let a = pearcey_fn::pearcey_asymptotic(j, z, &p2)?.p;
            lx.push(r.ln());
            ly.push(((q - a).norm() / q.norm()).ln());
        }
        let slope = ols_slope(&lx, &ly);
        out.push(check(
            S,
            &format!("asymptotic error slope j={j}"),
            (slope + 2.0).abs(),
            0.3 * ts,
        ));
    }

    // large-z frame built from the asymptotic columns (points in Theta_1,
    // whose columns p0, p1, p4 all have stated expansions)
    let frame = pearcey_fn::AsymptoticFrame::new(&params);
    let mut worst: f64 = 0.0;
    for z in [
        Complex64::from_polar(40.0, 2.0),
        Complex64::from_polar(40.0, 1.0),
    ] {
        let cols: Vec<[Complex64; 3]> = [0usize, 1, 4]
            .iter()
            .map(|&j| {
                let t = pearcey_fn::pearcey_asymptotic(j, z, &params).unwrap();
                [t.p, t.dp, t.d2p]
            })
            .collect();
        let psi = Matrix3::from_columns(cols[0], cols[1], cols[2]);
        let th = frame.theta_diag(z);
        let e_minus = Matrix3::diag(
            (-th.0[0][0]).exp(),
            (-th.0[1][1]).exp(),
            (-th.0[2][2]).exp(),
        );
        let d_inv = Matrix3::diag(z.powf(1.0 / 3.0), ONE, z.powf(-1.0 / 3.0));
        let m = psi
            .mul(&e_minus)
            .mul(&frame.l_for(z).inverse()?)
            .mul(&d_inv);
        let target = frame.psi0.scale(frame.prefactor());
        worst = worst.max(m.sub(&target).max_abs() / target.max_abs());
    }
    out.push(check(S, "large-z frame -> Psi0", worst, 1e-2 * ts));
    Ok(out)
}

fn kernel_suite(ts: f64) -> Result<Vec<CheckResult>> {
    const S: &str = "kernel";
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    let mut worst_im: f64 = 0.0;
    for rho in [-1.0, 0.0, 1.0] {
        let params = PearceyParams { rho };
        for i in 0..5 {
            for j in 0..5 {
                let x = -3.0 + 1.5 * i as f64;
                let y = -3.0 + 1.5 * j as f64;
                if (x - y).abs() < kernel::NEAR_DIAG_THRESHOLD {
                    continue;
                }
                let a = kernel::kernel_bh(x, y, &params)?;
                let full = kernel::kernel_rh_full(x, y, &params)?;
                worst = worst.max((a - full.re).abs() / (1.0 + a.abs()));
                worst_im = worst_im.max(full.im.abs());
            }
        }
    }
    out.push(check(S, "bh vs rh on 5x5 grid", worst, 1e-8 * ts));
    out.push(check(S, "imaginary residual", worst_im, 1e-9 * ts));

    let params = PearceyParams { rho: 0.0 };
    let d = kernel::kernel_diag(0.7, &params)?;
    let mut worst: f64 = 0.0;
    for eps in [1e-5, 1e-6] {
        let k = kernel::kernel_bh(0.7, 0.7 + eps, &params)?;
        worst = worst.max((k - d).abs() / eps);
    }
    out.push(check(
        S,
        "diagonal continuity |K - K_d| <= C eps",
        worst,
        10.0 * ts,
    ));

    // x <-> y symmetry is unproven for this kernel; report the observed
    // defect as a diagnostic only (never asserted)
    let mut defect: f64 = 0.0;
    for (x, y) in [(1.0, -0.5), (2.5, 0.3), (-1.2, 2.0)] {
        let a = kernel::kernel_bh(x, y, &params)?;
        let b = kernel::kernel_bh(y, x, &params)?;
        defect = defect.max((a - b).abs() / (1.0 + a.abs()));
    }
    out.push(check(
        S,
        "x<->y symmetry defect (diagnostic only)",
        defect,
        f64::INFINITY,
    ));
    Ok(out)
}

fn fredholm_suite(ts: f64) -> Result<Vec<CheckResult>> {
    const S: &str = "fredholm";
    let mut out = Vec::new();
    let params = PearceyParams { rho: 0.5 };
    let (s, m) = (2.0, 60);
    let v = fredholm::df_ds(s, &params, m)?;
    let fd = fredholm::df_ds_central(s, &params, m, 1e-3)?;
    out.push(check(
        S,
        "dF/ds resolvent vs central diff",
        (v - fd).abs(),
        1e-6 * ts,
    ));
    let v = fredholm::df_drho(s, &params, m)?;
    let fd = fredholm::df_drho_central(s, &params, m, 1e-3)?;
    out.push(check(
        S,
        "dF/drho identity vs central diff",
        (v - fd).abs(),
        1e-6 * ts,
    ));

    let params1 = PearceyParams { rho: 1.0 };
    let mm = fredholm::y1_x1_moments(2.0, &params1, 80)?;
    let d = fredholm::df_drho(2.0, &params1, 80)?;
    let via_y1 = -0.5 * (mm.y1.0[0][1] + mm.y1.0[1][2]).re;
    let via_x1 = -0.5 * (mm.x1.0[0][1] + mm.x1.0[1][2]).re + 1.0 / 54.0;
    out.push(check(
        S,
        "moment identity (Y1)",
        (via_y1 - d).abs(),
        1e-8 * ts,
    ));
    out.push(check(
        S,
        "moment identity (X1)",
        (via_x1 - d).abs(),
        1e-8 * ts,
    ));

    let p0 = PearceyParams { rho: 0.0 };
    let f = fredholm::fredholm_logdet(0.1, &p0, 16)?.f;
    let t = fredholm::trace_series_logdet(0.1, &p0, 6)?;
    out.push(check(
        S,
        "trace-series oracle at s=0.1",
        (f - t).abs(),
        1e-10 * ts,
    ));

    let f40 = fredholm::fredholm_logdet(3.0, &p0, 40)?.f;
    let f80 = fredholm::fredholm_logdet(3.0, &p0, 80)?.f;
    out.push(check(
        S,
        "Nystrom convergence (3,0,40)",
        (f40 - f80).abs(),
        1e-9 * ts,
    ));

    // embedded m/2 estimate across the rho family at s = 3
    let mut worst: f64 = 0.0;
    for rho in [-2.0, 0.0, 2.0] {
        let g = fredholm::fredholm_logdet(3.0, &PearceyParams { rho }, 40)?;
        worst = worst.max(g.est_error);
    }
    out.push(check(
        S,
        "est_error family (3, |rho|<=2, 40)",
        worst,
        1e-9 * ts,
    ));
    // at (8, -2) the determinant is e^{-84} and kernel-entry noise floors F
    // near 1e-7; reported as a diagnostic, see the (8, 0, 100) criterion for
    // the asserted bound
    let g = fredholm::fredholm_logdet(8.0, &PearceyParams { rho: -2.0 }, 100)?;
    out.push(check(
        S,
        "est_error at the hard corner (8,-2,100) (diagnostic only)",
        g.est_error,
        f64::INFINITY,
    ));
    Ok(out)
}

fn surface_suite(ts: f64) -> Result<Vec<CheckResult>> {
    const S: &str = "surface";
    let mut out = Vec::new();
    let params = PearceyParams { rho: 1.0 };
    let s = 2.0;

    let mut worst_alg: f64 = 0.0;
    let mut worst_vieta: f64 = 0.0;
    let mut worst_conj: f64 = 0.0;
    for z in [
        c64(0.37, 0.81),
        c64(-0.4, -1.3),
        c64(2.0, 0.5),
        c64(-3.0, 2.0),
    ] {
        let ws = [
            surface::w(Sheet::One, z)?,
            surface::w(Sheet::Two, z)?,
            surface::w(Sheet::Three, z)?,
        ];
        for wj in ws {
            worst_alg = worst_alg.max((wj * wj * wj - 3.0 * wj + 2.0 * z).norm());
        }
        worst_vieta = worst_vieta.max((ws[0] + ws[1] + ws[2]).norm());
        worst_vieta = worst_vieta.max((ws[0] * ws[1] + ws[0] * ws[2] + ws[1] * ws[2] + 3.0).norm());
        worst_vieta = worst_vieta.max((ws[0] * ws[1] * ws[2] + 2.0 * z).norm());
        for sh in [Sheet::One, Sheet::Two, Sheet::Three] {
            worst_conj =
                worst_conj.max((surface::w(sh, z.conj())? - surface::w(sh, z)?.conj()).norm());
            worst_conj = worst_conj.max(
                (surface::lambda(sh, z.conj(), s, &params)?
                    - surface::lambda(sh, z, s, &params)?.conj())
                .norm(),
            );
        }
    }
    out.push(check(
        S,
        "algebraic residual w^3 - 3w + 2z",
        worst_alg,
        1e-12 * ts,
    ));
    out.push(check(S, "Vieta identities", worst_vieta, 1e-11 * ts));
    out.push(check(S, "conjugation symmetry", worst_conj, 1e-11 * ts));

    let sum: Complex64 = [Sheet::One, Sheet::Two, Sheet::Three]
        .iter()
        .map(|&sh| surface::lambda(sh, c64(0.2, 0.3), s, &params).unwrap())
        .sum();
    out.push(check(
        S,
        "lambda sum rule",
        (sum - surface::lambda_sum_closed(s, &params)).norm(),
        1e-12 * ts,
    ));

    let eps = 1e-8;
    let mut worst: f64 = 0.0;
    let a = surface::w(Sheet::One, c64(-2.0, eps))?;
    let b = surface::w(Sheet::Three, c64(-2.0, -eps))?;
    worst = worst.max((a - b).norm());
    let a = surface::w(Sheet::One, c64(2.0, eps))?;
    let b = surface::w(Sheet::Two, c64(2.0, -eps))?;
    worst = worst.max((a - b).norm());
    let a = surface::lambda(Sheet::One, c64(-2.0, eps), s, &params)?;
    let b = surface::lambda(Sheet::Three, c64(-2.0, -eps), s, &params)?;
    worst = worst.max((a - b).norm());
    out.push(check(S, "cut continuations", worst, 1e-6 * ts));

    let l1 = surface::lambda(Sheet::One, c64(-1.0, 0.0), s, &params)?;
    let l2 = surface::lambda(Sheet::Two, c64(-1.0, 0.0), s, &params)?;
    let l3 = surface::lambda(Sheet::Three, c64(-1.0, 0.0), s, &params)?;
    out.push(check(
        S,
        "lambda_1 + lambda_3 - 2 lambda_2 at -1",
        ((l1 + l3 - 2.0 * l2).re - surface::lambda123_at_minus_one_closed(s, &params)).abs(),
        1e-10 * ts,
    ));

    // series orders (+-0.2 on the expected exponents)
    for (target, point, sheet, expected, label) in [
        (
            SeriesTarget::W,
            ExpansionPoint::MinusOne,
            Sheet::One,
            2.0,
            "w1 near -1",
        ),
        (
            SeriesTarget::W,
            ExpansionPoint::MinusOne,
            Sheet::Three,
            2.0,
            "w3 near -1",
        ),
        (
            SeriesTarget::W,
            ExpansionPoint::PlusOne,
            Sheet::Two,
            2.0,
            "w2 near +1",
        ),
        (
            SeriesTarget::W,
            ExpansionPoint::Infinity,
            Sheet::One,
            13.0 / 3.0,
            "w1 at inf",
        ),
        (
            SeriesTarget::W,
            ExpansionPoint::Infinity,
            Sheet::Three,
            13.0 / 3.0,
            "w3 at inf",
        ),
        (
            SeriesTarget::Lambda,
            ExpansionPoint::MinusOne,
            Sheet::One,
            2.0,
            "lambda1 near -1",
        ),
        (
            SeriesTarget::Lambda,
            ExpansionPoint::PlusOne,
            Sheet::One,
            2.0,
            "lambda1 near +1",
        ),
        (
            SeriesTarget::Lambda,
            ExpansionPoint::PlusOne,
            Sheet::Two,
            2.0,
            "lambda2 near +1",
        ),
        (
            SeriesTarget::Lambda,
            ExpansionPoint::Infinity,
            Sheet::Three,
            4.0 / 3.0,
            "lambda3 at inf",
        ),
    ] {
        let r = surface::series_check(target, point, sheet, 3.0, &params)?;
        out.push(check(
            S,
            &format!("series order: {label}"),
            (r.empirical_order - expected).abs(),
            0.2 * ts,
        ));
    }

    let k = surface::surface_constants(s, &params);
    let v = surface::lambda_infinity_constant(Sheet::Three, s, &params)?;
    out.push(check(
        S,
        "lambda at inf constant -D0",
        (v + k.d0).abs(),
        1e-6 * ts,
    ));

    // decay margins on the shifted rays at s = 10
    let mut worst = f64::NEG_INFINITY;
    let z = c64(1.0, 0.0) + Complex64::from_polar(2.0, PI / 4.0);
    worst = worst.max(
        surface::decay_margin(
            z,
            (Sheet::Two, Sheet::One),
            10.0,
            &PearceyParams { rho: 0.0 },
        )?
        .normalized,
    );
    for r in [0.5, 2.0, 5.0, 20.0] {
        let z = c64(1.0, 0.0) + Complex64::from_polar(r, PI / 4.0);
        worst = worst.max(
            surface::decay_margin(
                z,
                (Sheet::Two, Sheet::Three),
                10.0,
                &PearceyParams { rho: 0.0 },
            )?
            .re_diff,
        );
    }
    let z = c64(-1.0, 0.0) + Complex64::from_polar(2.0, 3.0 * PI / 4.0);
    worst = worst.max(
        surface::decay_margin(
            z,
            (Sheet::Three, Sheet::One),
            10.0,
            &PearceyParams { rho: 0.0 },
        )?
        .re_diff,
    );
    out.push(check(
        S,
        "decay margins negative on shifted rays",
        worst,
        -1e-3 / ts,
    ));
    Ok(out)
}

fn parametrix_suite(ts: f64) -> Result<Vec<CheckResult>> {
    const S: &str = "parametrix";
    let mut out = Vec::new();
    let p0 = PearceyParams { rho: 0.0 };
    let p1 = PearceyParams { rho: 1.0 };

    // Bessel jumps and unimodularity; the boundary values are approached with
    // offsets far below the tolerance (at +-1e-8 the residual is offset-
    // limited at ~2 eps |Phi'| ~ 9e-9)
    let eps = 1e-12;
    let up = parametrix::phi_bessel(0.0, c64(-4.0, eps))?;
    let dn = parametrix::phi_bessel(0.0, c64(-4.0, -eps))?;
    let j = Matrix2([[ZERO, ONE], [-ONE, ZERO]]);
    out.push(check(
        S,
        "Bessel jump on the negative axis",
        up.sub(&dn.mul(&j)).max_abs(),
        1e-9 * ts,
    ));
    let mut worst: f64 = 0.0;
    for z in [c64(3.0, 2.0), c64(-1.0, 4.0), c64(0.2, -0.8)] {
        worst = worst.max((parametrix::phi_bessel(0.0, z)?.det() - ONE).norm());
    }
    out.push(check(S, "det Phi = 1", worst, 1e-10 * ts));

    // Phi at infinity (relative to the asymptotic form's scale)
    let z = Complex64::from_polar(400.0, 0.9);
    let u = z.sqrt();
    let m = parametrix::phi_bessel(0.0, z)?;
    let lhs = m.mul(&Matrix2([[(-u).exp(), ZERO], [ZERO, u.exp()]]));
    let p = (PI * PI * z).powf(-0.25);
    let pref = Matrix2([[p, ZERO], [ZERO, p.inv()]]).mul(&Matrix2([
        [ONE / 2.0_f64.sqrt(), I / 2.0_f64.sqrt()],
        [I / 2.0_f64.sqrt(), ONE / 2.0_f64.sqrt()],
    ]));
    let corr = Matrix2([
        [ONE - 1.0 / (8.0 * u), -2.0 * I / (8.0 * u)],
        [-2.0 * I / (8.0 * u), ONE + 1.0 / (8.0 * u)],
    ]);
    let rhs = pref.mul(&corr);
    out.push(check(
        S,
        "Phi infinity expansion at |z|=400",
        lhs.sub(&rhs).max_abs() / rhs.max_abs(),
        1e-3 * ts,
    ));

    // N checks
    let eps = 1e-9;
    let jr = Matrix3::from_real([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
    let r1 = parametrix::global_n(c64(2.0, eps))?
        .sub(&parametrix::global_n(c64(2.0, -eps))?.mul(&jr))
        .max_abs();
    out.push(check(S, "N jump on (1, inf)", r1, 1e-8 * ts));
    let gc = GlobalConstants::new();
    let z = c64(0.3, 0.4);
    let resid = parametrix::global_n(z)?
        .sub(&gc.ups.mul(&parametrix::global_n(-z)?).mul(&gc.lam))
        .max_abs();
    out.push(check(S, "N symmetry", resid, 1e-10 * ts));
    let d0 = parametrix::global_n(c64(0.1, 0.2))?.det();
    let mut spread: f64 = 0.0;
    for z in [
        c64(-1.7, 0.9),
        c64(2.4, -1.0),
        c64(0.0, 3.0),
        c64(0.5, -0.1),
    ] {
        spread = spread.max((parametrix::global_n(z)?.det() - d0).norm() / d0.norm());
    }
    out.push(check(S, "det N constant", spread, 1e-9 * ts));

    // N1 recovery
    let om = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let om2 = om * om;
    let l_plus = Matrix3([[-om, om2, ONE], [-ONE, ONE, ONE], [-om2, om, ONE]]);
    let m_of = |r: f64| -> Result<Matrix3> {
        let z = Complex64::from_polar(r, 0.7);
        let d = Matrix3::diag(z.powf(1.0 / 3.0), ONE, z.powf(-1.0 / 3.0));
        Ok(parametrix::global_n(z)?
            .mul(&l_plus.inverse()?)
            .mul(&d)
            .sub(&Matrix3::identity())
            .scale(z))
    };
    let m1 = m_of(50.0)?;
    let m2 = m_of(100.0)?;
    let m3 = m_of(200.0)?;
    let extrap = m3
        .scale(c64(8.0 / 3.0, 0.0))
        .sub(&m2.scale(c64(2.0, 0.0)))
        .add(&m1.scale(c64(1.0 / 3.0, 0.0)));
    out.push(check(
        S,
        "N1 coefficient recovery",
        extrap.sub(&gc.n1).max_abs(),
        1e-5 * ts,
    ));

    // E analyticity and closed forms
    let s = 6.0;
    let up = parametrix::prefactor_e(c64(-1.1, 1e-8), s, &p0)?;
    let dn = parametrix::prefactor_e(c64(-1.1, -1e-8), s, &p0)?;
    out.push(check(
        S,
        "E analytic across (-1-delta, -1)",
        up.sub(&dn).max_abs() / up.max_abs(),
        1e-8 * ts,
    ));
    let k = surface::surface_constants(s, &p1);
    let (e0, _) = parametrix::e_at_minus_one(s, &p1)?;
    let sp = PI.sqrt();
    let s23 = s.powf(2.0 / 3.0);
    let c1h = k.c1.sqrt();
    let t = 3.0_f64;
    let expect = Matrix3([
        [
            -I * 2.0_f64.powf(1.0 / 12.0) * t.powf(0.25) * c1h * sp * s23,
            c64(-2.0_f64.powf(1.0 / 3.0) / t.sqrt(), 0.0),
            c64(
                -1.0 / (2.0_f64.powf(5.0 / 12.0) * t.powf(1.25) * c1h * sp * s23),
                0.0,
            ),
        ],
        [
            -I * 2.0_f64.powf(-0.25) * t.powf(0.25) * c1h * sp * s23,
            c64(2.0 / t.sqrt(), 0.0),
            c64(
                5.0 / (2.0_f64.powf(0.75) * t.powf(1.25) * c1h * sp * s23),
                0.0,
            ),
        ],
        [
            I * t.powf(0.25) * c1h * sp * s23 / 2.0_f64.powf(19.0 / 12.0),
            c64(-5.0 / (2.0_f64.powf(4.0 / 3.0) * t.sqrt()), 0.0),
            c64(
                25.0 / (2.0_f64.powf(25.0 / 12.0) * t.powf(1.25) * c1h * sp * s23),
                0.0,
            ),
        ],
    ]);
    out.push(check(
        S,
        "E(-1) closed form",
        e0.sub(&expect).max_abs(),
        1e-7 * ts,
    ));

    // residue of J_1^{(-1)} against the closed form
    let data = parametrix::r1_data(s, &p1)?;
    let pref = 1.0 / (16.0 * 6.0_f64.sqrt() * k.c1);
    let expect = Matrix3::from_real([
        [1.0, -2.0_f64.powf(4.0 / 3.0), -2.0_f64.powf(5.0 / 3.0)],
        [2.0_f64.powf(-1.0 / 3.0), -2.0, -2.0_f64.powf(4.0 / 3.0)],
        [-2.0_f64.powf(-5.0 / 3.0), 2.0_f64.powf(-1.0 / 3.0), 1.0],
    ])
    .scale(c64(pref, 0.0));
    out.push(check(
        S,
        "J_{-1} residue vs closed form",
        data.res_minus.sub(&expect).max_abs(),
        1e-8 * ts,
    ));

    // local parametrix jump and matching orders
    let x = -1.15;
    let up = parametrix::local_p(-1, c64(x, 1e-9), s, &p0)?;
    let dn = parametrix::local_p(-1, c64(x, -1e-9), s, &p0)?;
    let j3 = Matrix3::from_real([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]]);
    out.push(check(
        S,
        "P^(-1) jump on the left ray",
        up.sub(&dn.mul(&j3)).max_abs() / up.max_abs().max(1.0),
        1e-8 * ts,
    ));
    let zb = c64(-1.0, 0.0) + Complex64::from_polar(DISK_RADIUS, PI / 3.0);
    let svals = [4.0, 8.0, 16.0];
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for &sv in &svals {
        let p = parametrix::local_p(-1, zb, sv, &p0)?;
        let m = p.mul(&parametrix::global_n(zb)?.inverse()?);
        let j1 = parametrix::j1_minus(zb, sv, &p0)?;
        d1.push(m.sub(&Matrix3::identity()).max_abs());
        d2.push(
            m.sub(&Matrix3::identity())
                .sub(&j1.scale(c64(sv.powf(-4.0 / 3.0), 0.0)))
                .max_abs(),
        );
    }
    let lx: Vec<f64> = svals.iter().map(|s| s.ln()).collect();
    let s1 = ols_slope(&lx, &d1.iter().map(|d| d.ln()).collect::<Vec<_>>());
    let s2 = ols_slope(&lx, &d2.iter().map(|d| d.ln()).collect::<Vec<_>>());
    out.push(check(
        S,
        "matching order -4/3",
        (s1 + 4.0 / 3.0).abs(),
        0.3 * ts,
    ));
    out.push(check(
        S,
        "matching order -8/3",
        (s2 + 8.0 / 3.0).abs(),
        0.3 * ts,
    ));

    // script-factor limit (B^{-1} B')_31 -> pi i/2
    let v = parametrix::script_b_logderiv_31(c64(1e-6, 1e-9))?;
    out.push(check(
        S,
        "(B^-1 B')_31 limit",
        (v - I * PI / 2.0).norm(),
        1e-4 * ts,
    ));
    Ok(out)
}

fn asymptotics_suite(ts: f64) -> Result<Vec<CheckResult>> {
    const S: &str = "asymptotics";
    let mut out = Vec::new();
    let t = asymptotics::f_expansion(2.0, 0.0, 0.0);
    out.push(check(
        S,
        "termwise value at (2, 0)",
        (t.total() - (-9.0 / 8.0 - 2.0 / 9.0 * 2.0_f64.ln())).abs(),
        1e-14 * ts,
    ));
    let h = 1e-6;
    let ds = (asymptotics::f_expansion(5.0 + h, 0.7, 0.3).total()
        - asymptotics::f_expansion(5.0 - h, 0.7, 0.3).total())
        / (2.0 * h);
    out.push(check(
        S,
        "dF/ds expansion consistency",
        (ds - asymptotics::df_ds_expansion(5.0, 0.7)).abs(),
        1e-8 * ts,
    ));
    let dr = (asymptotics::f_expansion(5.0, 0.7 + h, 0.3).total()
        - asymptotics::f_expansion(5.0, 0.7 - h, 0.3).total())
        / (2.0 * h);
    out.push(check(
        S,
        "dF/drho expansion consistency",
        (dr - asymptotics::df_drho_expansion(5.0, 0.7)).abs(),
        1e-8 * ts,
    ));
    let samples: Vec<(f64, f64)> = (0..9)
        .map(|i| {
            let s = 4.0 + 0.5 * i as f64;
            let g = 0.7 + 0.3 * s.powf(-2.0 / 3.0);
            (s, g + asymptotics::f_expansion(s, 0.0, 0.0).total())
        })
        .collect();
    let rep = asymptotics::fit_constant(&samples, 0.0)?;
    out.push(check(
        S,
        "synthetic fit recovers c",
        (rep.c_hat - 0.7).abs(),
        1e-6 * ts,
    ));
    let samples: Vec<(f64, f64)> = (0..6)
        .map(|i| {
            let s = 4.0 + i as f64;
            (s, -s.powf(8.0 / 3.0))
        })
        .collect();
    let slope = asymptotics::forrester_exponent(&samples)?;
    out.push(check(
        S,
        "synthetic gap exponent",
        (slope - 8.0 / 3.0).abs(),
        1e-12 * ts,
    ));
    Ok(out)
}
