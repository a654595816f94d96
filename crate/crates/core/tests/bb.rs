use bbpgmo::bb::*;
use bbpgmo::*;
use proptest::prelude::*;

fn alphas_for(prev_x: Vec<f64>, prev_g: Vec<Vec<f64>>, x: Vec<f64>, g: Vec<Vec<f64>>) -> Vec<f64> {
    let mem = BbMemory {
        prev_x,
        prev_grads: Matrix::from_rows(&prev_g),
    };
    compute_alphas(&mem, &x, &Matrix::from_rows(&g), &BbConfig::default()).unwrap()
}

#[test]
fn diagonal_quadratic_gives_curvature_along_step() {
    // f = ½xᵀdiag(2,5)x, s = (1,0) → y = (2,0)
    let a = alphas_for(
        vec![0.0, 0.0],
        vec![vec![0.0, 0.0]],
        vec![1.0, 0.0],
        vec![vec![2.0, 0.0]],
    );
    assert_eq!(a, vec![2.0]);
}

#[test]
fn linear_objective_hits_alpha_min() {
    let a = alphas_for(
        vec![0.0, 0.0],
        vec![vec![1.0, 3.0]],
        vec![0.4, -1.0],
        vec![vec![1.0, 3.0]],
    );
    assert_eq!(a, vec![1e-3]);
}

#[test]
fn stiff_objective_is_clamped_to_alpha_max() {
    let a = alphas_for(vec![0.0], vec![vec![0.0]], vec![0.5], vec![vec![5e3]]);
    assert_eq!(a, vec![1e3]);
}

#[test]
fn negative_curvature_uses_norm_ratio() {
    // s = (1,0), y = (−3,4): ⟨s,y⟩ < 0, ‖y‖/‖s‖ = 5
    let a = alphas_for(
        vec![0.0, 0.0],
        vec![vec![0.0, 0.0]],
        vec![1.0, 0.0],
        vec![vec![-3.0, 4.0]],
    );
    assert_eq!(a, vec![5.0]);
}

#[test]
fn zero_step_is_rejected() {
    let mem = BbMemory {
        prev_x: vec![1.0, 2.0],
        prev_grads: Matrix::from_rows(&[vec![0.0, 0.0]]),
    };
    let g = Matrix::from_rows(&[vec![1.0, 0.0]]);
    assert_eq!(
        compute_alphas(&mem, &[1.0, 2.0], &g, &BbConfig::default()),
        Err(Error::DegenerateStep)
    );
}

proptest! {
    #[test]
    fn ratio_lies_between_extreme_eigenvalues(
        diag in proptest::collection::vec(1.0f64..100.0, 4),
        s in proptest::collection::vec(-1.0f64..1.0, 4),
        scale in 0.01f64..100.0,
    ) {
        prop_assume!(s.iter().map(|v| v * v).sum::<f64>() > 1e-6);
        let y: Vec<f64> = s.iter().zip(&diag).map(|(a, d)| a * d).collect();
        let mu = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let l = diag.iter().cloned().fold(0.0, f64::max);
        let a = alphas_for(vec![0.0; 4], vec![vec![0.0; 4]], s.clone(), vec![y.clone()])[0];
        prop_assert!(a >= mu * (1.0 - 1e-12) && a <= l * (1.0 + 1e-12));

        // invariant under (s, y) → (t s, t y)
        let ts: Vec<f64> = s.iter().map(|v| v * scale).collect();
        let ty: Vec<f64> = y.iter().map(|v| v * scale).collect();
        let b = alphas_for(vec![0.0; 4], vec![vec![0.0; 4]], ts, vec![ty])[0];
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn output_stays_in_safeguard_interval(
        s in proptest::collection::vec(-1.0f64..1.0, 3),
        y in proptest::collection::vec(-1e5f64..1e5, 3),
    ) {
        prop_assume!(s.iter().map(|v| v * v).sum::<f64>() > 1e-8);
        let a = alphas_for(vec![0.0; 3], vec![vec![0.0; 3]], s, vec![y])[0];
        prop_assert!((1e-3..=1e3).contains(&a));
    }
}
