//! Merit functions: the regularized gap `w_ℓ^α` through the dual solver and a
//! grid oracle for the global gap `u_0^α` on tiny problems.

use crate::dual::{frank_wolfe_solve_from, DirectionResult, FwConfig, SubproblemInput};
use crate::error::{check_len, Error, Result};
use crate::problem::{Bounds, EvalCounters, McoProblem};
use crate::Scalar;

/// Point and parameters at which a merit value is requested.
#[derive(Debug, Clone, PartialEq)]
pub struct MeritQuery<T> {
    pub x: Vec<T>,
    pub alpha: Vec<T>,
    pub ell: T,
}

impl<T: Scalar> MeritQuery<T> {
    pub fn new(x: Vec<T>, alpha: Vec<T>, ell: T) -> Result<Self> {
        let q = Self { x, alpha, ell };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        let pos = |v: T| v > T::zero() && v.is_finite();
        if pos(self.ell) && self.alpha.iter().all(|&a| pos(a)) {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "merit query needs ell > 0 and alpha > 0".into(),
            ))
        }
    }
}

/// Regularized gap value together with the direction it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct MeritValue<T> {
    pub value: T,
    pub direction: DirectionResult<T>,
}

/// `w_ℓ^α(x) = ℓ·w_1^{ℓα}(x)`, where `w_1^β` is minus the optimal value of the
/// direction subproblem with weights `β`.
///
/// The optimal value is taken at the recovered primal direction, so the result
/// can only underestimate; tiny negative values from the solve are cut to 0.
pub fn w_merit_detailed<T: Scalar>(
    problem: &McoProblem<T>,
    q: &MeritQuery<T>,
    fw: &FwConfig<T>,
) -> Result<MeritValue<T>> {
    q.validate()?;
    check_len(problem.n(), q.x.len())?;
    check_len(problem.m(), q.alpha.len())?;
    let mut counters = EvalCounters::default();
    let (_, g) = problem.evaluate_parts(&q.x, &mut counters)?;
    let grads = problem.jacobian(&q.x, &mut counters)?;
    let beta: Vec<T> = q.alpha.iter().map(|&a| a * q.ell).collect();
    let inp = SubproblemInput {
        x: &q.x,
        grads: &grads,
        g_at_x: &g,
        alphas: &beta,
        family: problem.nonsmooth(),
    };
    let direction = frank_wolfe_solve_from(&inp, fw, None)?;
    let value = (-q.ell * direction.primal_value(&beta)).max(T::zero());
    Ok(MeritValue { value, direction })
}

pub fn w_merit<T: Scalar>(
    problem: &McoProblem<T>,
    q: &MeritQuery<T>,
    fw: &FwConfig<T>,
) -> Result<T> {
    w_merit_detailed(problem, q, fw).map(|v| v.value)
}

/// Tensor grid over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub bounds: Bounds<T>,
    /// Points per axis, each at least 2.
    pub resolution: Vec<usize>,
}

impl<T: Scalar> Grid<T> {
    pub fn uniform(bounds: Bounds<T>, points_per_axis: usize) -> Self {
        let n = bounds.dim();
        Self {
            bounds,
            resolution: vec![points_per_axis; n],
        }
    }

    fn coordinate(&self, axis: usize, k: usize) -> T {
        let lo = self.bounds.lower[axis];
        let hi = self.bounds.upper[axis];
        let steps = T::from_usize_lossy(self.resolution[axis] - 1);
        lo + (hi - lo) * T::from_usize_lossy(k) / steps
    }
}

/// `max_y min_i (F_i(x) − F_i(y))/α_i` over the grid points `y` (and `y = x`).
///
/// Grid points outside the domain of `F` are skipped. This is a lower bound of
/// the global quantity and is only offered for `n ≤ 3`.
pub fn u0_bruteforce<T: Scalar>(
    problem: &McoProblem<T>,
    x: &[T],
    alpha: &[T],
    grid: &Grid<T>,
) -> Result<T> {
    let n = problem.n();
    if n > 3 {
        return Err(Error::Unsupported(format!(
            "grid oracle for u_0 needs n ≤ 3, got n = {n}"
        )));
    }
    check_len(n, x.len())?;
    check_len(problem.m(), alpha.len())?;
    check_len(n, grid.bounds.dim())?;
    if grid.resolution.len() != n || grid.resolution.iter().any(|&r| r < 2) {
        return Err(Error::InvalidInput(
            "grid needs at least 2 points per axis".into(),
        ));
    }
    if alpha.iter().any(|&a| !(a > T::zero())) {
        return Err(Error::InvalidInput("alpha must be positive".into()));
    }
    let mut counters = EvalCounters::default();
    let fx = problem.evaluate(x, &mut counters)?;

    let mut best = T::zero();
    let mut idx = vec![0usize; n];
    let mut y = vec![T::zero(); n];
    loop {
        for j in 0..n {
            y[j] = grid.coordinate(j, idx[j]);
        }
        if let Ok(fy) = problem.evaluate(&y, &mut counters) {
            let gap = fx
                .iter()
                .zip(&fy)
                .zip(alpha)
                .map(|((&a, &b), &w)| (a - b) / w)
                .fold(T::infinity(), T::min);
            best = best.max(gap);
        }
        // odometer increment
        let mut j = 0;
        loop {
            if j == n {
                return Ok(best);
            }
            idx[j] += 1;
            if idx[j] < grid.resolution[j] {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}
