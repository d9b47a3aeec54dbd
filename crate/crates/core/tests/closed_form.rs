use std::f64::consts::{FRAC_PI_4, PI};

use approx::assert_abs_diff_eq;
use greensign::closed_form::*;
use greensign::quadrature::integrate;
use greensign::{q_bar, Error, Kernel, ProblemParams, QuadratureCfg, SidedPoint};
use proptest::prelude::*;

fn x(v: f64) -> SidedPoint {
    SidedPoint::exact(v)
}

#[test]
fn ode_kernel_reference_value() {
    // e^{0.75}/(e − 1)
    let v = g_ode_exp(1.0, 1.0, x(0.5), x(0.25)).unwrap();
    assert_abs_diff_eq!(v, 1.232_044_698_110_553_7, epsilon = 1e-14);
}

#[test]
fn second_order_kernel_reference_value() {
    let v = g_reflection_second_order(FRAC_PI_4, 1.0, 0.0, 0.0).unwrap();
    assert_abs_diff_eq!(v, 2.0 / PI, epsilon = 1e-15);
}

#[test]
fn reflection_kernel_at_origin_from_the_right() {
    let v = g_reflection(0.2, 1.0, x(0.0), SidedPoint::plus(0.0)).unwrap();
    assert_abs_diff_eq!(v, 1.966_577_437_793_447, epsilon = 1e-13);
}

#[test]
fn reflection_kernel_from_second_order_kernel() {
    // Ḡ(t, s) = m G(t, −s) − ∂_s G(t, s), away from s = ±t.
    let (m, tt) = (0.37, 1.3);
    let h = 1e-6;
    for &(t, s) in &[(0.2, 0.7), (-0.9, 0.1), (0.5, -1.1), (1.2, -0.3)] {
        let g = |t, s| g_reflection_second_order(m, tt, t, s).unwrap();
        let ds = (g(t, s + h) - g(t, s - h)) / (2.0 * h);
        let expected = m * g(t, -s) - ds;
        assert_abs_diff_eq!(
            g_reflection(m, tt, x(t), x(s)).unwrap(),
            expected,
            epsilon = 1e-8
        );
    }
}

#[test]
fn ode_piecewise_zero_m_reference() {
    let p = ProblemParams::new(0.0, 1.0, 1.0).unwrap();
    assert_abs_diff_eq!(
        h_ode_piecewise_small_t(p, x(0.25), x(0.5)).unwrap(),
        0.75,
        epsilon = 1e-15
    );
}

#[test]
fn origin_jump_of_small_horizon_kernel() {
    let p = ProblemParams::new(2.36, 1.19, 0.3).unwrap();
    let k = ReflectionPiecewiseSmallT::new(p).unwrap();
    let jump = k.eval(x(0.0), SidedPoint::minus(0.0)).unwrap()
        - k.eval(x(0.0), SidedPoint::plus(0.0)).unwrap();
    assert_abs_diff_eq!(jump, 0.664_788_732_394_366_2, epsilon = 1e-12);
}

#[test]
fn ambiguous_points_are_rejected() {
    let g = ReflectionGreen::new(0.3, 1.0).unwrap();
    assert!(matches!(
        g.eval(x(0.4), x(0.4)),
        Err(Error::AmbiguousSide { .. })
    ));
    let k = ReflectionPiecewiseSmallT::new(ProblemParams::new(0.3, 0.1, 1.0).unwrap()).unwrap();
    assert!(matches!(
        k.eval(x(0.4), x(0.0)),
        Err(Error::AmbiguousSide { .. })
    ));
    // Continuous across s = −t.
    assert!(g.eval(x(0.4), x(-0.4)).is_ok());
}

#[test]
fn singular_parameters_are_rejected() {
    assert!(matches!(
        ReflectionGreen::new(PI, 1.0),
        Err(Error::SingularParameter(_))
    ));
    assert!(matches!(
        ReflectionGreen::new(0.0, 1.0),
        Err(Error::SingularParameter(_))
    ));
    assert!(matches!(
        OdeGreen::new(0.0, 1.0),
        Err(Error::SingularParameter(_))
    ));
    let eigen = ProblemParams::new(0.4, -0.4, 1.0).unwrap();
    assert!(matches!(
        ReflectionPiecewiseSmallT::new(eigen),
        Err(Error::SingularParameter(_))
    ));
    assert!(matches!(
        ProblemParams::new(f64::NAN, 0.0, 1.0),
        Err(Error::NonFinite(_))
    ));
    let big = ProblemParams::new(0.4, 0.1, 1.5).unwrap();
    assert!(matches!(
        ReflectionPiecewiseSmallT::new(big),
        Err(Error::Domain(_))
    ));
}

#[test]
fn diagonal_limit_fixed_point_forms() {
    // At the boundary value M₀ the operator G/D equals its closed forms.
    let (m, tt, big_m) = (0.5, 1.0, 0.1);
    let k = ReflectionPiecewiseSmallT::new(ProblemParams::new(m, big_m, tt).unwrap()).unwrap();
    let g = ReflectionGreen::new(m, tt).unwrap();
    let s = SidedPoint::minus(0.0);
    let numer = g.eval(s.below(), s).unwrap();
    let denom = k.eval(x(0.0), s).unwrap() / m;
    let (c, sn) = ((m * tt).cos(), (m * tt).sin());
    assert_abs_diff_eq!(
        numer / denom,
        (m + big_m) * (c - sn) / (c + sn),
        epsilon = 1e-12
    );

    let k = ReflectionPiecewiseSmallT::new(ProblemParams::new(m, -0.2, tt).unwrap()).unwrap();
    let s = SidedPoint::plus(0.0);
    let numer = g.eval(s.below(), s).unwrap();
    let denom = k.eval(x(0.0), s).unwrap() / m;
    assert_abs_diff_eq!(numer / denom, m - 0.2, epsilon = 1e-12);
    assert_abs_diff_eq!(q_bar(&k, s).unwrap(), k.eval(s.below(), s).unwrap());
}

#[test]
fn reflection_sign_theorem_on_a_grid() {
    let tt = 1.0;
    let n = 101;
    let sign_of = |m: f64| {
        let g = ReflectionGreen::new(m, tt).unwrap();
        let (mut pos, mut neg) = (true, true);
        for i in 0..n {
            for j in 0..n {
                let t = -tt + 2.0 * tt * i as f64 / (n - 1) as f64;
                let s = -tt + 2.0 * tt * j as f64 / (n - 1) as f64;
                let vals = if i == j {
                    vec![
                        g.eval(x(t), SidedPoint::minus(s)).unwrap(),
                        g.eval(x(t), SidedPoint::plus(s)).unwrap(),
                    ]
                } else {
                    vec![g.eval(x(t), x(s)).unwrap()]
                };
                for v in vals {
                    pos &= v > 0.0;
                    neg &= v < 0.0;
                }
            }
        }
        (pos, neg)
    };
    assert_eq!(sign_of(0.5), (true, false));
    assert_eq!(sign_of(-0.5), (false, true));
    assert_eq!(sign_of(0.9), (false, false));
    assert_eq!(sign_of(-1.2), (false, false));
}

fn quad_s(k: &dyn Kernel, t: f64) -> f64 {
    let (a, b) = k.domain();
    let mut breaks = k.s_breakpoints(t);
    breaks.push(-t);
    integrate(
        |r| k.eval(x(t), x(r)).unwrap(),
        a,
        b,
        &breaks,
        &QuadratureCfg::default(),
    )
    .unwrap()
}

fn away(a: f64, b: f64) -> bool {
    (a - b).abs() > 1e-4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_identities(m in 0.05f64..0.75, neg in any::<bool>(), tt in 0.2f64..1.0, t in -1.0f64..1.0, s in -1.0f64..1.0) {
        let m = if neg { -m } else { m };
        let (t, s) = (t * tt, s * tt);
        prop_assume!(away(t, s) && away(t, -s));
        let g = ReflectionGreen::new(m, tt).unwrap();
        let gm = ReflectionGreen::new(-m, tt).unwrap();
        let tp = x(t);
        // Unit jump on the diagonal.
        prop_assert!((g.eval(tp, tp.below()).unwrap() - g.eval(tp, tp.above()).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!((g.eval(tp.above(), tp).unwrap() - g.eval(tp.below(), tp).unwrap() - 1.0).abs() < 1e-12);
        // Ḡ(t,s) = Ḡ(−s,−t), Ḡ_m(t,s) = −Ḡ_{−m}(−t,−s), Ḡ(T,s) = Ḡ(−T,s).
        let v = g.eval(x(t), x(s)).unwrap();
        prop_assert!((v - g.eval(x(-s), x(-t)).unwrap()).abs() < 1e-12);
        prop_assert!((v + gm.eval(x(-t), x(-s)).unwrap()).abs() < 1e-12);
        prop_assert!((g.eval(x(tt), x(s)).unwrap() - g.eval(x(-tt), x(s)).unwrap()).abs() < 1e-12);
        // ∂_t Ḡ(t,s) + m Ḡ(−t,s) = 0.
        let h = 1e-6;
        prop_assume!(away(t + h, s) && away(t - h, s) && away(t + h, -s) && away(t - h, -s));
        let dt = (g.eval(x(t + h), x(s)).unwrap() - g.eval(x(t - h), x(s)).unwrap()) / (2.0 * h);
        prop_assert!((dt + m * g.eval(x(-t), x(s)).unwrap()).abs() < 1e-6 * (1.0 + v.abs()));
    }

    #[test]
    fn reflection_integral_matches_quadrature(m in 0.05f64..2.0, tt in 0.2f64..2.5, t in -1.0f64..1.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        prop_assume!(greensign::params::reflection_singular(m, tt).is_none() && (m * tt).sin().abs() > 0.05);
        let g = ReflectionGreen::new(m, tt).unwrap();
        let (t, a, b) = (t * tt, a * tt, b * tt);
        let exact = integral_g_reflection(m, tt, t, a, b).unwrap();
        let numeric = integrate(|r| g.eval(x(t), x(r)).unwrap(), a, b, &[t, -t], &QuadratureCfg::default()).unwrap();
        prop_assert!((exact - numeric).abs() < 1e-9 * (1.0 + exact.abs()));
    }

    #[test]
    fn small_horizon_kernels(m in -0.75f64..0.75, big_m in -1.5f64..1.5, tt in 0.2f64..1.0, t in -1.0f64..1.0, s in -1.0f64..1.0) {
        prop_assume!((m + big_m).abs() > 0.05 && m.abs() > 1e-3);
        let (t, s) = (t * tt, s * tt);
        prop_assume!(away(t, s) && away(t, -s) && away(s, 0.0) && away(t, 0.0));
        let p = ProblemParams::new(m, big_m, tt).unwrap();
        let k = ReflectionPiecewiseSmallT::new(p).unwrap();
        let km = ReflectionPiecewiseSmallT::new(p.negated()).unwrap();
        let v = k.eval(x(t), x(s)).unwrap();
        prop_assert!((v + km.eval(x(-t), x(-s)).unwrap()).abs() < 1e-10 * (1.0 + v.abs()));
        let tp = x(t);
        prop_assert!((k.eval(tp.above(), tp).unwrap() - k.eval(tp.below(), tp).unwrap() - 1.0).abs() < 1e-10);
        let zero = x(0.0);
        let origin_jump = k.eval(zero, zero.below()).unwrap() - k.eval(zero, zero.above()).unwrap();
        prop_assert!((origin_jump - m / (m + big_m)).abs() < 1e-10 * (1.0 + origin_jump.abs()));
        let q_jump = q_bar(&k, SidedPoint::plus(0.0)).unwrap() - q_bar(&k, SidedPoint::minus(0.0)).unwrap();
        prop_assert!((q_jump - big_m / (m + big_m)).abs() < 1e-10 * (1.0 + q_jump.abs()));
        // ∫ H̄(t, s) ds = 1/(m + M) against quadrature.
        prop_assert!((quad_s(&k, t) - 1.0 / (m + big_m)).abs() < 1e-9 * (1.0 + 1.0 / (m + big_m).abs()));
        prop_assert!((k.integrate_s(t, -tt, tt).unwrap() - 1.0 / (m + big_m)).abs() < 1e-9 * (1.0 + 1.0 / (m + big_m).abs()));
    }

    #[test]
    fn ode_identities(m in -2.0f64..2.0, big_m in -1.0f64..2.0, tt in 0.2f64..1.0, t in 0.0f64..1.0, s in 0.0f64..1.0) {
        prop_assume!((m + big_m).abs() > 0.05 && m.abs() > 1e-3);
        let (t, s) = (t * tt, s * tt);
        prop_assume!(away(t, s) && away(s, 0.0) && away(t, 0.0) && away(t, tt));
        let p = ProblemParams::new(m, big_m, tt).unwrap();
        let k = OdePiecewiseSmallT::new(p).unwrap();
        let km = OdePiecewiseSmallT::new(p.negated()).unwrap();
        let v = k.eval(x(t), x(s)).unwrap();
        prop_assert!((v + km.eval(x(tt - t), x(tt - s)).unwrap()).abs() < 1e-10 * (1.0 + v.abs()));
        let h = 1e-5;
        prop_assume!(away(t + h, s) && away(t - h, s));
        let dt = (k.eval(x(t + h), x(s)).unwrap() - k.eval(x(t - h), x(s)).unwrap()) / (2.0 * h);
        prop_assert!((dt + m * v + big_m * k.eval(x(0.0), x(s)).unwrap()).abs() < 1e-4);
        let g = OdeGreen::new(m, tt).unwrap();
        prop_assert!((quad_s(&g, t) - 1.0 / m).abs() < 1e-9 * (1.0 + 1.0 / m.abs()));
        prop_assert!((g.integrate_s(t, 0.0, tt).unwrap() - 1.0 / m).abs() < 1e-9 * (1.0 + 1.0 / m.abs()));
    }

    #[test]
    fn zero_m_kernels_are_limits(big_m in 0.2f64..1.5, t in -1.0f64..1.0, s in -1.0f64..1.0) {
        let tt = 0.8;
        let (t, s) = (t * tt, s * tt);
        prop_assume!(away(t, s) && away(t, -s) && away(s, 0.0));
        let at = |m: f64| ReflectionPiecewiseSmallT::new(ProblemParams::new(m, big_m, tt).unwrap()).unwrap().eval(x(t), x(s)).unwrap();
        prop_assert!((at(0.0) - at(1e-7)).abs() < 1e-5);
        let ode_at = |m: f64| OdePiecewiseSmallT::new(ProblemParams::new(m, big_m, tt).unwrap()).unwrap().eval(x(t.abs()), x(s.abs())).unwrap();
        prop_assert!((ode_at(0.0) - ode_at(1e-7)).abs() < 1e-5);
    }
}

#[test]
fn every_kind_builds_and_integrates() {
    let q = QuadratureCfg::default();
    for &tt in &[0.8, 1.6] {
        let p = ProblemParams::new(0.3, 0.2, tt).unwrap();
        for kind in greensign::KernelKind::ALL {
            let k = greensign::kernel_for(kind, p, &q).unwrap();
            let (a, b) = k.domain();
            let t = 0.37 * tt;
            let exact = k.integrate_s(t, a, b).unwrap();
            assert!(
                (exact - quad_s(k.as_ref(), t)).abs() < 1e-9,
                "{kind} at T = {tt}"
            );
        }
    }
}

#[test]
fn second_order_integral_is_inverse_square() {
    let k = SecondOrderGreen::new(0.4, 1.3).unwrap();
    assert_abs_diff_eq!(
        k.integrate_s(0.2, -1.3, 1.3).unwrap(),
        1.0 / 0.16,
        epsilon = 1e-12
    );
}
