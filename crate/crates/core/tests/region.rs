use approx::assert_abs_diff_eq;
use greensign::region::*;
use greensign::{assemble, Family, KernelKind, ProblemParams, QuadratureCfg, SidedPoint};

fn opts(family: Family, strategy: Strategy) -> ClassifyOptions {
    ClassifyOptions::new(family).with_strategy(strategy)
}

#[test]
fn closed_form_band_values() {
    let b = ode_region_boundary(1.0, 1.0).unwrap();
    assert_abs_diff_eq!(b.positive.1, 0.581_976_706_869_326_4, epsilon = 1e-14);
    let b = reflection_region_boundary_small_t(0.5, 1.0).unwrap();
    assert_abs_diff_eq!(b.positive.1, 0.207_621_930_428_112_98, epsilon = 1e-14);
}

#[test]
fn edge_classes() {
    let q = QuadratureCfg::default();
    assert_eq!(classify_point(0.3, -0.3, 1.6, &q), SignClass::Singular);
    assert_eq!(classify_point(0.3, -0.3, 0.6, &q), SignClass::Singular);
    assert_eq!(classify_point(0.9, 0.0, 1.0, &q), SignClass::SignChanging);
    assert_eq!(classify_point(0.0, 0.3, 1.0, &q), SignClass::Positive);
    assert_eq!(classify_point(0.0, 0.3, 1.6, &q), SignClass::Singular);
    assert_eq!(classify_point(0.21, 0.2, 1.6, &q), SignClass::Positive);
    assert_eq!(classify_point(-0.21, -0.2, 1.6, &q), SignClass::Negative);
    assert_eq!(
        classify_point(f64::NAN, 0.2, 1.6, &q),
        SignClass::Undetermined
    );
}

#[test]
fn fixed_point_operator_closed_forms_for_the_ode() {
    let (m, tt) = (0.8, 1.0);
    let q = QuadratureCfg::default();
    for &big_m in &[0.3, -0.5] {
        let k = assemble(
            ProblemParams::new(m, big_m, tt).unwrap(),
            KernelKind::OdeExp,
            &q,
        )
        .unwrap();
        let s = if big_m > 0.0 {
            SidedPoint::minus(tt)
        } else {
            SidedPoint::plus(0.0)
        };
        let op = fixed_point_operator(&k, s.below(), s).unwrap();
        let expected = if big_m > 0.0 {
            (-m * tt).exp() * (m + big_m)
        } else {
            m + big_m
        };
        assert_abs_diff_eq!(op, expected, epsilon = 1e-12);
    }
}

#[test]
fn fixed_point_operator_closed_forms_for_reflection() {
    let (m, tt): (f64, f64) = (0.5, 1.0);
    let q = QuadratureCfg::default();
    let (c, s_) = ((m * tt).cos(), (m * tt).sin());
    let k = assemble(
        ProblemParams::new(m, 0.15, tt).unwrap(),
        KernelKind::ReflectionFirstOrder,
        &q,
    )
    .unwrap();
    let s = SidedPoint::minus(0.0);
    assert_abs_diff_eq!(
        fixed_point_operator(&k, s.below(), s).unwrap(),
        (m + 0.15) * (c - s_) / (c + s_),
        epsilon = 1e-12
    );
    let k = assemble(
        ProblemParams::new(m, -0.3, tt).unwrap(),
        KernelKind::ReflectionFirstOrder,
        &q,
    )
    .unwrap();
    let s = SidedPoint::plus(0.0);
    assert_abs_diff_eq!(
        fixed_point_operator(&k, s.below(), s).unwrap(),
        m - 0.3,
        epsilon = 1e-12
    );
}

#[test]
fn bisection_recovers_closed_form_boundaries() {
    let cfg = ScanCfg::default();
    for &m in &[0.1, 0.5] {
        let ode = fixed_point_boundary(Family::Ode, m, 1.0, &cfg, 1e-10).unwrap();
        assert_abs_diff_eq!(ode, m / m.exp_m1(), epsilon = 1e-8);
        let refl = fixed_point_boundary(Family::Reflection, m, 1.0, &cfg, 1e-10).unwrap();
        assert_abs_diff_eq!(refl, 0.5 * m * (1.0 / m.tan() - 1.0), epsilon = 1e-8);
    }
}

#[test]
fn min_scan_agrees_with_closed_form_off_the_boundaries() {
    for family in [Family::Ode, Family::Reflection] {
        let tt = 0.9;
        let m_axis = linspace(-0.8, 0.8, 25);
        let big_m_axis = linspace(-1.2, 1.9, 25);
        let closed_strategy = match family {
            Family::Ode => Strategy::ClosedFormOde,
            Family::Reflection => Strategy::ClosedFormReflectionSmallT,
        };
        let scan = sweep_region(
            m_axis.clone(),
            big_m_axis.clone(),
            tt,
            &opts(family, Strategy::MinScan),
        );
        let closed = sweep_region(m_axis, big_m_axis, tt, &opts(family, closed_strategy));
        let (ni, nj) = (closed.m_axis.len(), closed.big_m_axis.len());
        for i in 0..ni {
            for j in 0..nj {
                let c = closed.get(i, j);
                let near_boundary = (i.saturating_sub(1)..=(i + 1).min(ni - 1)).any(|a| {
                    (j.saturating_sub(1)..=(j + 1).min(nj - 1)).any(|b| closed.get(a, b) != c)
                });
                if !near_boundary {
                    assert_eq!(
                        scan.get(i, j),
                        c,
                        "{family} at m={}, M={}",
                        closed.m_axis[i],
                        closed.big_m_axis[j]
                    );
                }
            }
        }
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn sweep_is_symmetric_and_deterministic() {
    let axis_m = linspace(-1.2, 1.2, 17);
    let axis_big = linspace(-1.5, 1.5, 17);
    let o = ClassifyOptions::new(Family::Reflection);
    let g = sweep_region(axis_m.clone(), axis_big.clone(), 1.6, &o);
    let n = axis_m.len();
    for i in 0..n {
        for j in 0..n {
            let mirrored = match g.get(n - 1 - i, n - 1 - j) {
                SignClass::Positive => SignClass::Negative,
                SignClass::Negative => SignClass::Positive,
                c => c,
            };
            assert_eq!(g.get(i, j), mirrored);
            let c = g.get(i, j);
            if c == SignClass::Positive {
                assert!(axis_m[i] + axis_big[j] > 0.0);
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let single = pool.install(|| sweep_region(axis_m, axis_big, 1.6, &o));
    assert_eq!(single, g);
}

#[test]
fn grid_serialisation() {
    let g = sweep_region(
        linspace(0.1, 0.3, 2),
        linspace(0.0, 0.1, 2),
        1.0,
        &ClassifyOptions::new(Family::Ode),
    );
    let mut buf = Vec::new();
    g.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "m,M,class");
    assert_eq!(lines.len(), 5);
    let json = g.to_json();
    assert_eq!(json["classes"].as_array().unwrap().len(), 4);
    assert_eq!(json["M_axis"].as_array().unwrap().len(), 2);
}

#[test]
fn audit_on_the_worked_example() {
    let a = audit_minimum_location(
        ProblemParams::new(0.21, 0.2, 1.6).unwrap(),
        &ScanCfg::default(),
    )
    .unwrap();
    assert!(a.agrees(1e-9));
    assert!(a.minimum.value > 0.0);
}
