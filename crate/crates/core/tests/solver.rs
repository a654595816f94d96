use approx::assert_abs_diff_eq;
use bbpgmo::problem::SmoothComponent;
use bbpgmo::prox::ProxKind;
use bbpgmo::solver::*;
use bbpgmo::*;

fn half_sq_1d() -> McoProblem<f64> {
    McoProblem::new(
        "half-square",
        1,
        vec![SmoothComponent::new(
            |x: &[f64]| 0.5 * x[0] * x[0],
            |x: &[f64], g: &mut [f64]| g[0] = x[0],
        )
        .with_lipschitz(1.0)
        .with_strong_convexity(1.0)],
        ProxKind::Zero,
        None,
    )
    .unwrap()
}

#[test]
fn separate_mode_solves_quadratic_in_one_step() {
    let p = half_sq_1d();
    let r = solve(&p, &[2.0], &SolverConfig::new(Algorithm::PgmoSeparate)).unwrap();
    assert_eq!(r.status, Status::CriticalPoint);
    assert_eq!(r.iters, 1);
    assert_abs_diff_eq!(r.final_x[0], 0.0, epsilon = 1e-15);
    assert_eq!(r.feval(), 1);
}

#[test]
fn critical_start_takes_no_step() {
    let sq = || {
        SmoothComponent::new(
            |x: &[f64]| 0.5 * (x[0] * x[0] + x[1] * x[1]),
            |x: &[f64], g: &mut [f64]| g.copy_from_slice(x),
        )
        .with_lipschitz(1.0)
    };
    let p = McoProblem::new("same", 2, vec![sq(), sq()], ProxKind::Zero, None).unwrap();
    for alg in [Algorithm::Bbpgmo, Algorithm::PgmoLineSearch { ell: 1.0 }] {
        let r = solve(&p, &[0.0, 0.0], &SolverConfig::new(alg)).unwrap();
        assert_eq!(r.status, Status::CriticalPoint);
        assert_eq!(r.iters, 0);
        assert!(r.final_direction.unwrap().d_norm() <= 1e-6);
    }
}

#[test]
fn config_validation_uses_problem_metadata() {
    let p = half_sq_1d();
    assert!(SolverConfig::new(Algorithm::PgmoFixed { ell: 0.4 })
        .validate(&p)
        .is_err());
    assert!(SolverConfig::new(Algorithm::PgmoFixed { ell: 0.6 })
        .validate(&p)
        .is_ok());
    assert!(SolverConfig::new(Algorithm::AdaptiveBbpgmo { tau: 1.0 })
        .validate(&p)
        .is_err());
    let lin = McoProblem::new(
        "lin",
        1,
        vec![SmoothComponent::new(
            |x: &[f64]| x[0],
            |_: &[f64], g: &mut [f64]| g[0] = 1.0,
        )],
        ProxKind::Zero,
        None,
    )
    .unwrap();
    assert!(SolverConfig::new(Algorithm::PgmoSeparate)
        .validate(&lin)
        .is_err());
    assert!(SolverConfig::new(Algorithm::PgmoStrongConvexity)
        .validate(&lin)
        .is_err());
    assert!(solve(&p, &[1.0, 2.0], &SolverConfig::new(Algorithm::Bbpgmo)).is_err());
}

#[test]
fn infeasible_start_is_projected() {
    let p = McoProblem::new(
        "simplex",
        2,
        vec![SmoothComponent::new(
            |x: &[f64]| x[0] * x[0] + 2.0 * x[1] * x[1],
            |x: &[f64], g: &mut [f64]| {
                g[0] = 2.0 * x[0];
                g[1] = 4.0 * x[1];
            },
        )],
        ProxKind::Simplex,
        None,
    )
    .unwrap();
    let r = solve(&p, &[3.0, 3.0], &SolverConfig::new(Algorithm::Bbpgmo)).unwrap();
    assert!(r.start_projected);
    assert_eq!(r.status, Status::CriticalPoint);
    // minimizer of x² + 2y² on the simplex: (2/3, 1/3)
    assert_abs_diff_eq!(r.final_x[0], 2.0 / 3.0, epsilon = 1e-6);
}
