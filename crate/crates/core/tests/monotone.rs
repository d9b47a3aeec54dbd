use greensign::monotone::*;
use greensign::{Error, ProblemParams, QuadratureCfg};

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn linear_probe_is_reproduced_in_one_step() {
    for &tt in &[0.8, 1.6, 2.5] {
        let p = ProblemParams::new(0.21, 0.2, tt).unwrap();
        let n = (32.0 * tt).round() as usize * 2;
        let grid_n = if UniformGrid::new(tt, n).is_ok() {
            n
        } else {
            80
        };
        let pr =
            MonotoneProblem::with_constants(linear_probe(0.21, 0.2), p, grid_n, 3.0, 2.0).unwrap();
        let out = operator_t(&pr, &pr.alpha0, &QuadratureCfg::default()).unwrap();
        let exact = 1.0 / 0.41;
        assert!(out.iter().all(|v| (v - exact).abs() < 1e-4), "T = {tt}");
    }
}

#[test]
fn operator_is_second_order_accurate() {
    // The error against the exact constant shrinks by about 4 when the
    // step halves.
    let p = ProblemParams::new(0.3, 0.25, 1.0).unwrap();
    let err = |n| {
        let pr = MonotoneProblem::with_constants(linear_probe(0.3, 0.25), p, n, 0.0, 0.0).unwrap();
        let out = operator_t(&pr, &pr.alpha0, &QuadratureCfg::default()).unwrap();
        out.iter()
            .map(|v| (v - 1.0 / 0.55).abs())
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(32), err(64));
    assert!(e1 / e2 > 3.5 && e1 / e2 < 4.5, "ratio {}", e1 / e2);
}

#[test]
fn example_two_converges_monotonically() {
    let pr = Example::Two.problem(256).unwrap();
    let cfg = MonotoneCfg {
        max_iter: 10,
        tol: 0.0,
        ..Default::default()
    };
    let tr = monotone_iterate(&pr, &cfg).unwrap();
    assert_eq!(tr.iterations(), 10);
    assert!(tr.monotone_ok.iter().all(|&ok| ok));
    for w in tr.alpha_seq.windows(2) {
        assert!(w[1].iter().zip(&w[0]).all(|(new, old)| *new <= old + 1e-9));
    }
    for w in tr.beta_seq.windows(2) {
        assert!(w[1].iter().zip(&w[0]).all(|(new, old)| *new >= old - 1e-9));
    }
    assert!(tr.final_gap <= 1e-2);
    let phi = SampledFn::new(pr.grid.clone(), tr.alpha().to_vec()).unwrap();
    let r = solution_residual(&pr.f, &phi);
    assert!(r.max_abs() <= 5e-3);
    assert!(r.periodicity_gap <= 1e-6);
}

#[test]
fn example_one_reaches_tolerance() {
    let pr = Example::One.problem(128).unwrap();
    let cfg = MonotoneCfg {
        max_iter: 200,
        tol: 1e-10,
        ..Default::default()
    };
    let tr = monotone_iterate(&pr, &cfg).unwrap();
    assert!(tr.converged_at.is_some());
    assert!(tr.final_gap < 1e-8);
    assert!(hypothesis_violation(&pr.f, pr.params, -1.0, 1.0, 9).is_none());
}

#[test]
fn initial_functions_are_lower_and_upper_solutions() {
    let pr = Example::Two.problem(64).unwrap();
    let alpha = SampledFn::new(pr.grid.clone(), pr.alpha0.clone()).unwrap();
    let beta = SampledFn::new(pr.grid.clone(), pr.beta0.clone()).unwrap();
    assert!(check_lower_solution(&pr.f, &alpha, 1e-12).1);
    assert!(check_upper_solution(&pr.f, &beta, 1e-12).1);
    // Swapped roles fail.
    assert!(!check_lower_solution(&pr.f, &beta, 1e-12).1);
}

#[test]
fn dual_variant_on_a_negative_kernel() {
    // With (m, M) negated the kernel is negative and the roles swap.
    let p = ProblemParams::new(-0.21, -0.2, 1.6).unwrap();
    let f = RhsFn::new("tanh-sum", |t, x, y| 0.2 * (t + x + y).tanh());
    let mut pr = MonotoneProblem::with_constants(f, p, 64, -0.8, 0.8).unwrap();
    pr.dual = true;
    let tr = monotone_iterate(
        &pr,
        &MonotoneCfg {
            max_iter: 30,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(tr.monotone_ok.iter().all(|&ok| ok));
    assert!(tr.final_gap < 1e-3);
}

#[test]
fn gate_rejects_sign_changing_kernels() {
    let p = ProblemParams::new(0.5, 0.3, 1.6).unwrap();
    let pr = MonotoneProblem::with_constants(tanh1(0.1), p, 64, 0.8, -0.8).unwrap();
    let err = monotone_iterate(&pr, &MonotoneCfg::default()).unwrap_err();
    assert!(matches!(err, Error::GateFailed { .. }));
}

#[test]
fn unordered_initial_functions_are_rejected() {
    let mut pr = Example::Two.problem(64).unwrap();
    std::mem::swap(&mut pr.alpha0, &mut pr.beta0);
    assert!(matches!(
        monotone_iterate(&pr, &MonotoneCfg::default()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn violations_are_reported() {
    // Initial functions that are not lower/upper solutions break monotonicity.
    let p = ProblemParams::new(0.21, 0.2, 1.6).unwrap();
    let pr = MonotoneProblem::with_constants(linear_probe(0.21, 0.2), p, 64, 2.0, 1.0).unwrap();
    let err = monotone_iterate(&pr, &MonotoneCfg::default()).unwrap_err();
    assert!(
        matches!(err, Error::MonotonicityViolation { .. }),
        "{err:?}"
    );
    let lax = MonotoneCfg {
        strict: false,
        max_iter: 3,
        ..Default::default()
    };
    let tr = monotone_iterate(&pr, &lax).unwrap();
    assert!(!tr.monotone_ok[0]);
}

#[test]
fn grid_must_hit_the_integers() {
    assert!(matches!(
        UniformGrid::new(1.6, 100),
        Err(Error::GridMismatch(_))
    ));
    let pr = Example::Two.problem(64).unwrap();
    assert!(matches!(
        operator_t(&pr, &[0.0; 5], &QuadratureCfg::default()),
        Err(Error::GridMismatch(_))
    ));
}

#[test]
fn literal_argument_form_changes_the_iterates() {
    let mut pr = Example::Two.problem(64).unwrap();
    let q = QuadratureCfg::default();
    let reflected = operator_t(&pr, &pr.grid.nodes(), &q).unwrap();
    pr.form = ArgumentForm::Literal;
    let literal = operator_t(&pr, &pr.grid.nodes(), &q).unwrap();
    assert!(sup(&reflected, &literal) > 1e-3);
}

#[test]
fn trace_serialisation() {
    let pr = Example::Two.problem(16).unwrap();
    let tr = monotone_iterate(
        &pr,
        &MonotoneCfg {
            max_iter: 2,
            ..Default::default()
        },
    )
    .unwrap();
    let mut buf = Vec::new();
    tr.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("iter,t,alpha,beta\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 33);
    assert_eq!(tr.to_json()["alpha_seq"].as_array().unwrap().len(), 3);
}
