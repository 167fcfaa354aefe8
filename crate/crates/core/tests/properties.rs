use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use sharpineq::constants::{
    a3k, rho_k, rs_coeffs_generic, rs_coeffs_unweighted, sharp_s_div, sharp_s_gamma, sharp_s_singular,
    weak_hr_constant, RsParams,
};
use sharpineq::functionals::{q_ckn, q_div, shri_gap, weak_hr_ratio};
use sharpineq::harness::{run_suite, sweep, Axis, Config, Suite, SweepFamily, SweepSpec};
use sharpineq::profiles::{ModeFunction, RadialProfile};
use sharpineq::spectral::{mode_minimum, FormFamily, Grid1D};
use sharpineq::transforms::{identity_lemtle, kelvin_equiv};

fn bump() -> impl Strategy<Value = RadialProfile> {
    (0.2f64..5.0, 0.3f64..2.0).prop_map(|(c, w)| RadialProfile::gauss_bump(c, w).unwrap())
}

fn regular_point() -> impl Strategy<Value = (u32, f64, f64)> {
    (5u32..=9, 0.0f64..1.0, 0.05f64..1.0).prop_map(|(n, s, t)| {
        let nf = n as f64;
        let alpha = -2.5f64.min(nf - 2.5) * s.max(0.05);
        let lo = alpha - 2.0;
        let hi = nf * alpha / (nf - 2.0);
        (n, alpha, lo + (hi - lo) * t)
    })
}

fn singular_point() -> impl Strategy<Value = (u32, f64, f64)> {
    (5u32..=9, 0.05f64..1.0, 0.0f64..0.95).prop_map(|(n, s, t)| {
        let nf = n as f64;
        let alpha = -2.5 * s;
        let lo = (nf - 4.0) / (nf - 2.0) * alpha - 4.0;
        (n, alpha, lo + (alpha - 2.0 - lo) * t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ckn_quotient_is_dilation_invariant(n in 5u32..=9, g in -1.5f64..=0.0, amp in 0.1f64..10.0, lambda in 0.2f64..5.0) {
        let u = RadialProfile::ckn_extremal(amp, lambda, n, g).unwrap();
        let q = q_ckn(&u, n, g).unwrap();
        prop_assert!((q / sharp_s_gamma(n, g).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bumps_do_not_beat_the_ckn_constant(n in 5u32..=9, g in -1.9f64..=0.0, u in bump()) {
        prop_assert!(q_ckn(&u, n, g).unwrap() >= sharp_s_gamma(n, g).unwrap() * (1.0 - 1e-10));
    }

    #[test]
    fn bumps_do_not_beat_the_div_constant((n, a, b) in regular_point(), u in bump()) {
        prop_assert!(q_div(&u, n, a, b).unwrap() >= sharp_s_div(n, a, b).unwrap() * (1.0 - 1e-10));
    }

    #[test]
    fn singular_div_duality((n, a, b) in singular_point()) {
        let s = sharp_s_singular(n, a, b).unwrap();
        let d = sharp_s_div(n, a, 2.0 * a - b - 4.0).unwrap();
        prop_assert!((s - d).abs() <= 1e-14 * s.abs(), "{s} {d}");
    }

    #[test]
    fn kelvin_map_is_an_involution_on_beta((n, a, b) in singular_point(), u in bump()) {
        let (_, bar) = kelvin_equiv(&u.times_power(2.0 + b - a), n, a, b).unwrap();
        prop_assert!(((2.0 * a - bar - 4.0) - b).abs() < 1e-14);
    }

    #[test]
    fn unweighted_coefficients_exact(n in 5i64..=12, p in 0i64..40, q in 1i64..=10) {
        let mu = BigRational::new(BigInt::from(p), BigInt::from(q));
        prop_assume!(mu < BigRational::from_integer(BigInt::from(n - 4)));
        let nn = BigRational::from_integer(BigInt::from(n));
        prop_assert_eq!(rs_coeffs_generic(nn.clone(), BigRational::zero(), mu.clone()), rs_coeffs_unweighted(nn, mu));
    }

    #[test]
    fn weak_hr_constant_bounds_every_mode(n in 3u32..=9, a in -6.0f64..2.0) {
        let nf = n as f64;
        prop_assume!(a < (nf - 2.0) / 2.0 && (a - (nf - 4.0) / 2.0).abs() > 1e-3);
        let c = weak_hr_constant(n, a).unwrap();
        for k in 0..=20 {
            prop_assert!(rho_k(n, a, k).unwrap() >= c * (1.0 - 1e-12) - 1e-12);
        }
    }

    #[test]
    fn weak_hr_ratio_of_bumps_exceeds_constant(n in 3u32..=8, a in -5.0f64..0.5, k in 0u32..=3, f in bump()) {
        prop_assume!(a < (n as f64 - 2.0) / 2.0);
        let m = ModeFunction::new(k, f.times_power(k as f64)).unwrap();
        let c = weak_hr_constant(n, a).unwrap();
        prop_assert!(weak_hr_ratio(&m, n, a).unwrap() >= c * (1.0 - 1e-9) - 1e-12);
    }

    #[test]
    fn a3k_positive(n in 5u32..=12, g in -1.99f64..=0.0, t in 0.001f64..0.999, k in 1u32..=200) {
        let mu = g + (n as f64 - 4.0 - g) * t;
        prop_assert!(a3k(&RsParams::new(n, g, mu).unwrap(), k) > 0.0);
    }

    #[test]
    fn strict_gap_positive(n in 5u32..=9, g in -1.9f64..=0.0, u in bump()) {
        prop_assert!(shri_gap(&u, n, g).unwrap() > 0.0);
    }

    #[test]
    fn lemtle_residual_small(n in 5u32..=9, t in 0.0f64..0.9, b in proptest::array::uniform4(-3.0f64..3.0), f in bump()) {
        let mu = -1.5 + (n as f64 - 2.5) * t;
        prop_assert!(identity_lemtle(&f, n, mu, b).unwrap() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // nested windows at the same spacing: the smaller one can only raise the minimum
    #[test]
    fn window_enlarging_is_monotone(n in 3u32..=7, a in -4.0f64..0.5, k in 0u32..=2) {
        prop_assume!(a < (n as f64 - 2.0) / 2.0);
        let grid = Grid1D::symmetric(12.0, 801).unwrap();
        let small = grid.sub_window(0.5).unwrap();
        let fam = FormFamily::WeakHR { n, a };
        let big = mode_minimum(&fam, k, &grid).unwrap().min_ratio;
        let sm = mode_minimum(&fam, k, &small).unwrap().min_ratio;
        prop_assert!(sm >= big - 1e-9 * big.abs().max(1.0), "{sm} < {big}");
    }

    #[test]
    fn sweeps_never_emit_non_finite(n in 3u32..=9, lo in -4.0f64..0.0, span in 0.1f64..6.0, steps in 1usize..12) {
        for (family, axes) in [
            (SweepFamily::Gamma, vec![Axis { name: "gamma".into(), min: lo, max: lo + span, steps }]),
            (SweepFamily::WeakHr, vec![Axis { name: "a".into(), min: lo, max: lo + span, steps }]),
            (SweepFamily::Region, vec![
                Axis { name: "alpha".into(), min: lo, max: lo + span, steps },
                Axis { name: "beta".into(), min: lo - 2.0, max: lo + span, steps },
            ]),
        ] {
            let csv = sweep(&SweepSpec { family, n, axes, outputs: vec![] }).unwrap().to_csv().unwrap();
            prop_assert!(!csv.contains("NaN") && !csv.contains("inf"));
        }
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let cfg = Config { seed, draws: 1, ..Config::default() };
        let a = run_suite(Suite::Identities, &cfg).unwrap();
        let b = run_suite(Suite::Identities, &cfg).unwrap();
        prop_assert_eq!(a.body_json().unwrap(), b.body_json().unwrap());
        prop_assert!(a.all_pass());
    }
}
