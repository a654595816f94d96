use bbpgmo::line_search::*;
use bbpgmo::problem::SmoothComponent;
use bbpgmo::prox::ProxKind;
use bbpgmo::*;

fn scaled_square(l: f64) -> McoProblem<f64> {
    McoProblem::new(
        "sq",
        1,
        vec![SmoothComponent::new(
            move |x: &[f64]| 0.5 * l * x[0] * x[0],
            move |x: &[f64], g: &mut [f64]| g[0] = l * x[0],
        )
        .with_lipschitz(l)],
        ProxKind::Zero,
        None,
    )
    .unwrap()
}

#[test]
fn full_step_accepted_when_curvature_is_small() {
    let p = scaled_square(1.0);
    let mut c = EvalCounters::default();
    // d = −x (α = L): F drops from 2 to 0
    let out = armijo_search(
        &p,
        &[2.0],
        &[-2.0],
        &[2.0],
        &[-4.0],
        &LineSearchConfig::default(),
        1.0,
        &mut c,
    )
    .unwrap();
    assert_eq!(out.t, 1.0);
    assert_eq!(out.backtracks, 0);
    assert_eq!(out.evals, 1);
    assert_eq!(c.full_evals, 1);
}

#[test]
fn accepted_step_respects_lower_bound() {
    // f = ½Lx², d = −∇f/α, rhs = −L²x²/α; bound t ≥ min(1, 2γ(1−σ)α/L)
    let cfg = LineSearchConfig::default();
    for l in [1.0, 10.0, 100.0] {
        for alpha in [0.05, 0.5, 2.0, 30.0] {
            let p = scaled_square(l);
            let x = 1.7;
            let d = -l * x / alpha;
            let rhs = l * x * d;
            let f0 = 0.5 * l * x * x;
            let mut c = EvalCounters::default();
            let out = armijo_search(&p, &[x], &[d], &[f0], &[rhs], &cfg, 1.0, &mut c).unwrap();
            let floor = (2.0 * cfg.gamma * (1.0 - cfg.sigma) * alpha / l).min(1.0);
            assert!(
                out.t >= floor - 1e-12,
                "L={l} α={alpha}: t={} floor={floor}",
                out.t
            );
            // backtracks = log_γ(t / t_cap)
            let implied = (out.t.ln() / cfg.gamma.ln()).round() as usize;
            assert_eq!(implied, out.backtracks);
        }
    }
}

#[test]
fn ascent_direction_fails() {
    let p = scaled_square(1.0);
    let mut c = EvalCounters::default();
    let err = armijo_search(
        &p,
        &[2.0],
        &[1.0],
        &[2.0],
        &[2.0],
        &LineSearchConfig::default(),
        1.0,
        &mut c,
    )
    .unwrap_err();
    // fails either at the budget or once x + t·d rounds back to x
    assert!(err.backtracks <= 60);
    assert!(err.last_t < 1e-15);
}

#[test]
fn feasible_step_ratio_test() {
    let b = Bounds::uniform(2, -2.0, 2.0).unwrap();
    assert_eq!(
        max_feasible_step(&[0.0, 0.0], &[4.0, 0.0], Some(&b)).unwrap(),
        0.5
    );
    assert_eq!(
        max_feasible_step(&[1.0, 1.0], &[-1.0, -0.5], Some(&b)).unwrap(),
        1.0
    );
    assert_eq!(
        max_feasible_step(&[2.0, 0.0], &[1.0, 0.0], Some(&b)).unwrap(),
        0.0
    );
    assert_eq!(
        max_feasible_step(&[5.0, 0.0], &[1.0, 0.0], None).unwrap(),
        1.0
    );
    assert!(max_feasible_step(&[3.0, 0.0], &[1.0, 0.0], Some(&b)).is_err());
}

#[test]
fn config_validation() {
    assert!(LineSearchConfig::<f64>::default().validate().is_ok());
    let bad = LineSearchConfig {
        sigma: 1.0,
        ..LineSearchConfig::<f64>::default()
    };
    assert!(bad.validate().is_err());
}
