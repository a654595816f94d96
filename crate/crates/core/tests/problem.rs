use approx::assert_abs_diff_eq;
use bbpgmo::problem::*;
use bbpgmo::*;

fn half_sq(center: Vec<f64>) -> SmoothComponent<f64> {
    let c2 = center.clone();
    SmoothComponent::new(
        move |x: &[f64]| {
            0.5 * x
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
        },
        move |x: &[f64], g: &mut [f64]| {
            for j in 0..x.len() {
                g[j] = x[j] - c2[j];
            }
        },
    )
    .with_lipschitz(1.0)
    .with_strong_convexity(1.0)
}

fn linear(b: Vec<f64>) -> SmoothComponent<f64> {
    let b2 = b.clone();
    SmoothComponent::new(
        move |x: &[f64]| x.iter().zip(&b).map(|(a, c)| a * c).sum(),
        move |_x: &[f64], g: &mut [f64]| g.copy_from_slice(&b2),
    )
}

#[test]
fn quadratic_pair_at_origin() {
    let p = McoProblem::new(
        "pair",
        2,
        vec![half_sq(vec![0.0, 0.0]), half_sq(vec![2.0, 0.0])],
        ProxKind::Zero,
        None,
    )
    .unwrap();
    let mut c = EvalCounters::default();
    assert_eq!(p.evaluate(&[0.0, 0.0], &mut c).unwrap(), vec![0.0, 2.0]);
    assert_eq!(c.full_evals, 1);
    assert_eq!(c.f_evals, 2);
    p.evaluate(&[1.0, 0.0], &mut c).unwrap();
    assert_eq!(c.full_evals, 2);
    assert_eq!(c.f_evals, 4);
}

#[test]
fn l1_only_objectives() {
    let zero = || SmoothComponent::new(|_: &[f64]| 0.0, |_: &[f64], g: &mut [f64]| g.fill(0.0));
    let p = McoProblem::new(
        "l1",
        2,
        vec![zero(), zero()],
        ProxKind::uniform_l1(2, 0.5).unwrap(),
        None,
    )
    .unwrap();
    let mut c = EvalCounters::default();
    assert_eq!(p.evaluate(&[1.0, -1.0], &mut c).unwrap(), vec![1.0, 1.0]);
}

#[test]
fn jacobian_rows_and_counts() {
    let p = McoProblem::new(
        "jac",
        2,
        vec![half_sq(vec![0.0, 0.0]), linear(vec![1.0, -2.0])],
        ProxKind::Zero,
        None,
    )
    .unwrap();
    let mut c = EvalCounters::default();
    let j = p.jacobian(&[3.0, 4.0], &mut c).unwrap();
    assert_eq!(j.row(0), &[3.0, 4.0]);
    assert_eq!(j.row(1), &[1.0, -2.0]);
    let j2 = p.jacobian(&[-7.0, 0.5], &mut c).unwrap();
    assert_eq!(j2.row(1), &[1.0, -2.0]);
    assert_eq!(c.grad_evals, 4);
    assert!(gradient_check(&p, &[0.3, -1.2]).unwrap() <= 1e-5);
}

#[test]
fn errors_are_reported() {
    let bad = SmoothComponent::new(
        |_: &[f64]| f64::NAN,
        |_: &[f64], g: &mut [f64]| g.fill(f64::INFINITY),
    );
    let p = McoProblem::new(
        "bad",
        1,
        vec![half_sq(vec![0.0]), bad],
        ProxKind::Zero,
        None,
    )
    .unwrap();
    let mut c = EvalCounters::default();
    assert!(matches!(
        p.evaluate(&[0.0, 0.0], &mut c),
        Err(Error::DimensionMismatch {
            expected: 1,
            found: 2
        })
    ));
    assert!(matches!(
        p.evaluate(&[0.0], &mut c),
        Err(Error::NonFinite { objective: 1, .. })
    ));
    assert!(matches!(
        p.jacobian(&[0.0], &mut c),
        Err(Error::NonFinite { objective: 1, .. })
    ));
}

#[test]
fn indicator_values_are_extended_reals() {
    let p = McoProblem::new(
        "simplex",
        2,
        vec![half_sq(vec![0.0, 0.0])],
        ProxKind::Simplex,
        None,
    )
    .unwrap();
    assert_eq!(p.nonsmooth().value(0, &[0.5, 0.5]), ExtReal::Finite(0.0));
    assert_eq!(p.nonsmooth().value(0, &[0.5, 0.6]), ExtReal::Infinite);
    let mut c = EvalCounters::default();
    assert_eq!(
        p.evaluate(&[1.0, 1.0], &mut c),
        Err(Error::Infeasible { objective: 0 })
    );
}

#[test]
fn bounds_restrict_the_family() {
    let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
    let p = McoProblem::new(
        "boxed",
        2,
        vec![half_sq(vec![0.0, 0.0])],
        ProxKind::uniform_l1(1, 0.5).unwrap(),
        Some(b),
    )
    .unwrap();
    let fam = p.nonsmooth();
    assert!(fam.has_indicator());
    let prox = fam.combined_prox(&[1.0], &[3.0, -0.2]).unwrap();
    assert_eq!(prox, vec![1.0, 0.0]);
    assert_eq!(fam.value(0, &[2.0, 0.0]), ExtReal::Infinite);
    assert_abs_diff_eq!(fam.value(0, &[0.5, -0.5]).finite().unwrap(), 0.5);
    assert_eq!(
        fam.combined_prox(&[0.0], &[3.0, -0.2]).unwrap(),
        vec![3.0, -0.2]
    );
}

#[test]
fn invariants_checked_at_construction() {
    assert!(Bounds::new(vec![0.0], vec![0.0]).is_err());
    let bad = half_sq(vec![0.0]).with_strong_convexity(2.0);
    assert!(McoProblem::new("x", 1, vec![bad], ProxKind::Zero, None).is_err());
    assert!(McoProblem::<f64>::new("x", 1, vec![], ProxKind::Zero, None).is_err());
    assert!(McoProblem::new(
        "x",
        1,
        vec![half_sq(vec![0.0])],
        ProxKind::Simplex,
        Some(Bounds::uniform(1, 0.0, 1.0).unwrap())
    )
    .is_err());
}
