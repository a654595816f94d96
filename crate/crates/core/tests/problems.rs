use approx::assert_abs_diff_eq;
use bbpgmo::problems::{
    self, make_markowitz, make_markowitz_from, make_named, make_quadratic, registry_keys,
    MarkowitzData, QuadraticSpec, StartSampling,
};
use bbpgmo::{gradient_check, Error, EvalCounters, McoProblem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn eval(p: &McoProblem<f64>, x: &[f64]) -> Vec<f64> {
    p.evaluate(x, &mut EvalCounters::default()).unwrap()
}

#[test]
fn every_registered_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for key in registry_keys() {
        let p = make_named::<f64>(&key).unwrap();
        let sampling =
            StartSampling::for_problem(&p).expect("registered problems have a sampling region");
        for _ in 0..20 {
            let x = sampling.sample(&mut rng);
            let err = gradient_check(&p, &x).unwrap();
            assert!(err <= 1e-5, "{key} at {x:?}: relative error {err}");
        }
    }
}

#[test]
fn bk1_at_origin() {
    let p = make_named::<f64>("BK1").unwrap();
    assert_eq!(p.n(), 2);
    let f = eval(&p, &[0.0, 0.0]);
    assert_abs_diff_eq!(f[0], 0.0);
    assert_abs_diff_eq!(f[1], 50.0);
}

#[test]
fn jos1_at_ones() {
    for (key, n) in [("JOS1a", 50), ("JOS1b", 100)] {
        let p = make_named::<f64>(key).unwrap();
        assert_eq!(p.n(), n);
        let x = vec![1.0; n];
        // g = (1/n)‖x‖₁ = 1 is added to both smooth parts
        let mut c = EvalCounters::default();
        let smooth = p.evaluate_parts(&x, &mut c).unwrap().0;
        assert_abs_diff_eq!(smooth[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(smooth[1], 1.0, epsilon = 1e-12);
        let f = eval(&p, &x);
        assert_abs_diff_eq!(f[0], 2.0, epsilon = 1e-12);
    }
}

#[test]
fn unknown_key_lists_the_registry() {
    match make_named::<f64>("XYZ") {
        Err(Error::UnknownProblem { key, available }) => {
            assert_eq!(key, "XYZ");
            assert!(available.iter().any(|k| k == "BK1"));
            assert!(available.iter().any(|k| k == "Markowitz"));
        }
        other => panic!("expected registry error, got {other:?}"),
    }
}

#[test]
fn acceptance_entries_are_flagged() {
    let flagged: Vec<&str> = problems::REGISTRY
        .iter()
        .filter(|e| e.acceptance)
        .map(|e| e.key)
        .collect();
    assert_eq!(flagged, ["BK1", "JOS1a", "JOS1b", "Markowitz"]);
}

#[test]
fn markowitz_data_is_embedded_verbatim() {
    let d = MarkowitzData::embedded();
    assert_eq!(d.mu[0], 1.0672);
    assert_eq!(d.mu[6], 1.1975);
    assert_eq!(d.sigma[0][0], 0.0005);
    assert_eq!(d.sigma[6][6], 0.0672);
    for i in 0..8 {
        for j in 0..8 {
            assert_eq!(d.sigma[i][j], d.sigma[j][i]);
        }
    }
}

#[test]
fn markowitz_vertices_and_uniform_portfolio() {
    let p = make_markowitz::<f64>().unwrap();
    let d = MarkowitzData::embedded();
    let mut c = EvalCounters::default();
    for j in 0..8 {
        let mut e = vec![0.0; 8];
        e[j] = 1.0;
        let (smooth, _) = p.evaluate_parts(&e, &mut c).unwrap();
        assert_abs_diff_eq!(smooth[1], d.sigma[j][j], epsilon = 1e-15);
        assert_abs_diff_eq!(smooth[0], -d.mu[j], epsilon = 1e-15);
    }
    let f = eval(&p, &[0.125; 8]);
    let mean_mu: f64 = d.mu.iter().sum::<f64>() / 8.0;
    assert_abs_diff_eq!(f[0], -mean_mu, epsilon = 1e-12);
    assert_abs_diff_eq!(f[0], -1.1139, epsilon = 1e-4);
    // outside the simplex the indicator is infinite
    assert!(p.evaluate(&[0.2; 8], &mut c).is_err());
}

#[test]
fn markowitz_lipschitz_from_the_spectrum() {
    let d = MarkowitzData::embedded();
    let (lo, hi) = d.sigma_eigen_range();
    assert!(lo > -d.psd_tolerance);
    let p = make_markowitz::<f64>().unwrap();
    let l = p.smooth()[1].lipschitz().unwrap();
    assert_abs_diff_eq!(l, 2.0 * hi, epsilon = 1e-12);
    assert_eq!(p.smooth()[0].lipschitz(), Some(0.0));
}

#[test]
fn returns_table_is_parsed() {
    let text = "\
        # two securities, three years
        A    B
        1.10 0.90
        1.00 1.20
        1.21 1.00
    ";
    let d = MarkowitzData::from_returns_table(text).unwrap();
    // geometric mean of 1.1, 1.0, 1.21 is 1.1
    assert_abs_diff_eq!(d.mu[0], 1.1, epsilon = 1e-12);
    let mean_b = (0.9 + 1.2 + 1.0) / 3.0;
    let var_b = [0.9, 1.2, 1.0f64]
        .iter()
        .map(|v| (v - mean_b).powi(2))
        .sum::<f64>()
        / 2.0;
    assert_abs_diff_eq!(d.sigma[1][1], var_b, epsilon = 1e-14);
    assert_eq!(d.sigma[0][1], d.sigma[1][0]);
    let p = make_markowitz_from::<f64>(&d).unwrap();
    assert_eq!(p.n(), 2);

    assert!(MarkowitzData::from_returns_table("A B\n1.0 1.0\n").is_err());
    assert!(MarkowitzData::from_returns_table("A B\n1.0 1.0\n1.0\n").is_err());
    assert!(MarkowitzData::from_returns_table("A B\n1.0 -1.0\n1.0 1.0\n").is_err());
    assert!(MarkowitzData::from_returns_table("A B\n1.0 x\n1.0 1.0\n").is_err());
}

#[test]
fn indefinite_covariance_is_rejected() {
    let d = MarkowitzData {
        mu: vec![1.0, 1.0],
        sigma: vec![vec![1.0, 2.0], vec![2.0, 1.0]],
        psd_tolerance: 1e-10,
    };
    assert!(make_markowitz_from::<f64>(&d).is_err());
}

#[test]
fn quadratic_family_is_reproducible() {
    let spec = QuadraticSpec::new(10, -2.0, 2.0, 42);
    let a = spec.generate().unwrap();
    let b = spec.generate().unwrap();
    assert_eq!(a, b);
    assert_eq!(a.fingerprint(), b.fingerprint());
    let other = QuadraticSpec::new(10, -2.0, 2.0, 43).generate().unwrap();
    assert_ne!(a.fingerprint(), other.fingerprint());
    for diag in &a.a_diag {
        assert!(diag.iter().all(|&v| (1.0..=100.0).contains(&v)));
    }
    for b in &a.b {
        assert!(b.iter().all(|&v| (-10.0..=10.0).contains(&v)));
    }

    let p = make_quadratic::<f64>(&spec).unwrap();
    for c in p.smooth() {
        assert!(c.lipschitz().unwrap() <= 100.0);
        assert!(c.strong_convexity().unwrap() >= 1.0);
    }
}

#[test]
fn quadratic_with_identity_hessian() {
    let spec = QuadraticSpec {
        diag_range: (1.0, 1.0),
        ..QuadraticSpec::new(3, -2.0, 2.0, 5)
    };
    let data = spec.generate().unwrap();
    let p = data.clone().into_problem::<f64>("identity").unwrap();
    let x = [0.5, -1.0, 1.5];
    let jac = p.jacobian(&x, &mut EvalCounters::default()).unwrap();
    for i in 0..2 {
        for j in 0..3 {
            assert_abs_diff_eq!(jac.get(i, j), x[j] + data.b[i][j], epsilon = 1e-15);
        }
    }
}

#[test]
fn simplex_sampling_stays_on_the_simplex() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = StartSampling::<f64>::Simplex(8);
    for _ in 0..100 {
        let x = s.sample(&mut rng);
        assert!(x.iter().all(|&v| v >= 0.0));
        assert_abs_diff_eq!(x.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}
