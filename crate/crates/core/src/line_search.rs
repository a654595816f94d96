//! Vector Armijo backtracking and the bounded step cap.

use thiserror::Error;

use crate::error::{check_len, Error, Result};
use crate::linalg;
use crate::problem::{Bounds, EvalCounters, McoProblem};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchConfig<T> {
    /// Sufficient-decrease fraction σ.
    pub sigma: T,
    /// Backtracking factor γ.
    pub gamma: T,
    pub max_backtracks: usize,
}

impl<T: Scalar> Default for LineSearchConfig<T> {
    fn default() -> Self {
        Self {
            sigma: T::lit(1e-4),
            gamma: T::lit(0.5),
            max_backtracks: 60,
        }
    }
}

impl<T: Scalar> LineSearchConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v > T::zero() && v < T::one();
        if unit(self.sigma) && unit(self.gamma) && self.max_backtracks > 0 {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "line search needs sigma, gamma in (0,1) and max_backtracks > 0".into(),
            ))
        }
    }
}

/// Accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchOutcome<T> {
    pub t: T,
    pub x_new: Vec<T>,
    pub f_new: Vec<T>,
    pub backtracks: usize,
    /// Objective vector evaluations spent, accepted trial included.
    pub evals: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("Armijo search failed after {backtracks} backtracks (last t = {last_t})")]
pub struct LineSearchFailure<T: Scalar> {
    pub last_t: T,
    pub backtracks: usize,
    /// Objective values at the last trial, when they were finite.
    pub last_f: Option<Vec<T>>,
    pub evals: usize,
}

impl<T: Scalar> From<LineSearchFailure<T>> for Error {
    fn from(f: LineSearchFailure<T>) -> Self {
        Error::LineSearchFailed {
            last_t: f.last_t.as_f64(),
            backtracks: f.backtracks,
        }
    }
}

/// Trial point `x + t·d`, clamped into the bounds to absorb rounding.
pub(crate) fn trial_point<T: Scalar>(x: &[T], t: T, d: &[T], bounds: Option<&Bounds<T>>) -> Vec<T> {
    let y = linalg::add_scaled(x, t, d);
    match bounds {
        Some(b) => b.clamp(&y),
        None => y,
    }
}

/// Largest `t ∈ [0, 1]` with `x + t·d` inside the bounds (exact ratio test).
pub fn max_feasible_step<T: Scalar>(x: &[T], d: &[T], bounds: Option<&Bounds<T>>) -> Result<T> {
    check_len(x.len(), d.len())?;
    let Some(b) = bounds else {
        return Ok(T::one());
    };
    check_len(b.dim(), x.len())?;
    if !b.contains(x) {
        return Err(Error::InvalidInput(
            "step cap requested from an infeasible point".into(),
        ));
    }
    // steps that overshoot by rounding only are treated as feasible
    let slack = T::lit(1e-12);
    let mut t = T::one();
    for j in 0..x.len() {
        let (lo, hi, xj, dj) = (b.lower[j], b.upper[j], x[j], d[j]);
        if dj > T::zero() && xj + dj > hi + slack * (T::one() + hi.abs()) {
            t = t.min((hi - xj) / dj);
        } else if dj < T::zero() && xj + dj < lo - slack * (T::one() + lo.abs()) {
            t = t.min((lo - xj) / dj);
        }
    }
    Ok(t.max(T::zero()))
}

/// Largest `t ∈ {t_cap·γ^j}` with `F_i(x + t·d) − F_i(x) ≤ t·σ·rhs_i` for all `i`.
///
/// `rhs_i = ⟨∇f_i(x), d⟩ + g_i(x + d) − g_i(x)`. Trial points where some `F_i`
/// is not finite are rejected like any other failed trial.
#[allow(clippy::too_many_arguments)]
pub fn armijo_search<T: Scalar>(
    problem: &McoProblem<T>,
    x: &[T],
    d: &[T],
    f_at_x: &[T],
    rhs: &[T],
    cfg: &LineSearchConfig<T>,
    t_cap: T,
    counters: &mut EvalCounters,
) -> Result<LineSearchOutcome<T>, LineSearchFailure<T>> {
    let mut t = t_cap;
    let mut last_f = None;
    let mut evals = 0;
    for backtracks in 0..=cfg.max_backtracks {
        let y = trial_point(x, t, d, problem.bounds());
        if y == x {
            // the step has vanished in floating point; no further progress
            return Err(LineSearchFailure {
                last_t: t,
                backtracks,
                last_f,
                evals,
            });
        }
        evals += 1;
        if let Ok(fy) = problem.evaluate(&y, counters) {
            let accepted = fy
                .iter()
                .zip(f_at_x)
                .zip(rhs)
                .all(|((&fn_, &fo), &r)| fn_ - fo <= t * cfg.sigma * r);
            if accepted {
                return Ok(LineSearchOutcome {
                    t,
                    x_new: y,
                    f_new: fy,
                    backtracks,
                    evals,
                });
            }
            last_f = Some(fy);
        } else {
            last_f = None;
        }
        if backtracks < cfg.max_backtracks {
            t = t * cfg.gamma;
        }
    }
    Err(LineSearchFailure {
        last_t: t,
        backtracks: cfg.max_backtracks,
        last_f,
        evals,
    })
}
