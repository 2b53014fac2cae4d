//! Property tests for the algebraic invariants: randomized points instead of
//! the hand-picked samples in the unit tests.

use num_complex::Complex64;
use pearcey_core::pearcey_fn::{ode_residual, pearcey_p, pearcey_q, PearceyParams};
use pearcey_core::surface::{eta, lambda, lambda_sum_closed, w, Sheet};
use pearcey_core::{kernel_bh, kernel_rh};
use proptest::prelude::*;

fn off_cuts(re: f64, im: f64) -> bool {
    im.abs() > 1e-3 || re.abs() < 0.99
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eta_satisfies_its_quadratic(re in -4.0..4.0f64, im in -4.0..4.0f64) {
        prop_assume!(off_cuts(re, im));
        let z = Complex64::new(re, im);
        let e = eta(z).unwrap();
        prop_assert!((e * e + 2.0 * z * e + 1.0).norm() < 1e-12);
        prop_assert!(e.im > -1e-14);
        prop_assert!((eta(z).unwrap() * eta(-z).unwrap() + 1.0).norm() < 1e-12);
    }

    #[test]
    fn w_cubic_and_vieta(re in -5.0..5.0f64, im in -5.0..5.0f64) {
        prop_assume!(off_cuts(re, im));
        let z = Complex64::new(re, im);
        let ws = [
            w(Sheet::One, z).unwrap(),
            w(Sheet::Two, z).unwrap(),
            w(Sheet::Three, z).unwrap(),
        ];
        for wj in ws {
            prop_assert!((wj * wj * wj - 3.0 * wj + 2.0 * z).norm() < 1e-11);
        }
        prop_assert!((ws[0] + ws[1] + ws[2]).norm() < 1e-11);
        prop_assert!((ws[0] * ws[1] * ws[2] + 2.0 * z).norm() < 1e-11);
        for sh in [Sheet::One, Sheet::Two, Sheet::Three] {
            let a = w(sh, z.conj()).unwrap();
            prop_assert!((a - w(sh, z).unwrap().conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn lambda_sum_rule(re in -3.0..3.0f64, im in 0.01..3.0f64,
                       s in 0.5..8.0f64, rho in -4.0..4.0f64) {
        let z = Complex64::new(re, im);
        let params = PearceyParams { rho };
        let sum: Complex64 = [Sheet::One, Sheet::Two, Sheet::Three]
            .iter()
            .map(|&sh| lambda(sh, z, s, &params).unwrap())
            .sum();
        prop_assert!((sum - lambda_sum_closed(s, &params)).norm() < 1e-11);
    }

    #[test]
    fn parity_of_p0_and_q(x in -6.0..6.0f64, rho in -4.0..4.0f64) {
        let params = PearceyParams { rho };
        let z = Complex64::new(x, 0.0);
        let a = pearcey_p(0, z, &params).unwrap();
        let b = pearcey_p(0, -z, &params).unwrap();
        prop_assert_eq!(a.p, b.p);
        let qa = pearcey_q(z, &params).unwrap();
        let qb = pearcey_q(-z, &params).unwrap();
        prop_assert!((qa.p + qb.p).norm() < 1e-12 * (1.0 + qa.p.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pearcey_ode_residual(j in 0usize..6, re in -7.0..7.0f64, im in -7.0..7.0f64,
                            rho in -4.0..4.0f64) {
        let params = PearceyParams { rho };
        let z = Complex64::new(re, im);
        let r = ode_residual(j, z, &params).unwrap();
        let t = pearcey_p(j, z, &params).unwrap();
        prop_assert!(r.norm() <= 1e-8 * (1.0 + t.p.norm()));
    }

    #[test]
    fn kernel_representations_agree(x in -3.0..3.0f64, y in -3.0..3.0f64,
                                    rho in -2.0..2.0f64) {
        prop_assume!((x - y).abs() > 1e-3);
        let params = PearceyParams { rho };
        let a = kernel_bh(x, y, &params).unwrap();
        let b = kernel_rh(x, y, &params).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()));
    }
}
