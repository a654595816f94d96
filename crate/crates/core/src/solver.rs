//! Outer iterations of the proximal gradient family.
//!
//! All algorithms share one skeleton: pick per-objective weights `α`, solve the
//! direction subproblem through its dual, stop when `‖d‖ ≤ d_tol`, otherwise
//! take a step. They differ in how `α` is chosen and how the step is taken:
//!
//! | algorithm              | `α_i`                     | step                    |
//! |------------------------|---------------------------|-------------------------|
//! | `PgmoLineSearch`       | `ℓ`                       | Armijo                  |
//! | `PgmoFixed`            | `ℓ > L_max/2`             | unit                    |
//! | `Bbpgmo`               | Barzilai-Borwein          | Armijo                  |
//! | `PgmoSeparate`         | `L_i`                     | unit                    |
//! | `PgmoStrongConvexity`  | `μ_i`                     | Armijo                  |
//! | `AdaptiveBbpgmo`       | BB, inflated by `τ`       | unit, after α repair    |
//!
//! With equal weights `α_i = ℓ` the subproblem has the same minimizer as the
//! classical `min_d max_i ψ_i(d) + (ℓ/2)‖d‖²`, so one dual solver serves all.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bb::{compute_alphas, BbConfig, BbMemory};
use crate::dual::{frank_wolfe_solve_from, DirectionResult, DualError, FwConfig, SubproblemInput};
use crate::error::{check_len, Error, Result};
use crate::linalg::{self, Matrix};
use crate::line_search::{armijo_search, max_feasible_step, trial_point, LineSearchConfig};
use crate::problem::{EvalCounters, McoProblem};
use crate::Scalar;

/// Upper limit on α-repair rounds in one adaptive iteration.
const MAX_INFLATION_ROUNDS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm<T> {
    /// Proximal gradient with constant `ℓ` and Armijo line search.
    PgmoLineSearch { ell: T },
    /// Proximal gradient with constant `ℓ > L_max/2` and unit steps.
    PgmoFixed { ell: T },
    /// Barzilai-Borwein weights with Armijo line search.
    Bbpgmo,
    /// Per-objective `α_i = L_i` with unit steps.
    PgmoSeparate,
    /// Per-objective `α_i = μ_i` with Armijo line search.
    PgmoStrongConvexity,
    /// Barzilai-Borwein initial weights repaired until each quadratic upper
    /// bound holds, then a unit step.
    AdaptiveBbpgmo { tau: T },
}

impl<T: Scalar> Algorithm<T> {
    pub fn label(&self) -> &'static str {
        match self {
            Self::PgmoLineSearch { .. } => "pgmo_ls",
            Self::PgmoFixed { .. } => "pgmo_fixed",
            Self::Bbpgmo => "bbpgmo",
            Self::PgmoSeparate => "pgmo_L",
            Self::PgmoStrongConvexity => "pgmo_mu",
            Self::AdaptiveBbpgmo { .. } => "abbpgmo",
        }
    }

    fn uses_bb(&self) -> bool {
        matches!(self, Self::Bbpgmo | Self::AdaptiveBbpgmo { .. })
    }

    fn uses_armijo(&self) -> bool {
        matches!(
            self,
            Self::PgmoLineSearch { .. } | Self::Bbpgmo | Self::PgmoStrongConvexity
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    pub algorithm: Algorithm<T>,
    pub bb: BbConfig<T>,
    pub line_search: LineSearchConfig<T>,
    pub fw: FwConfig<T>,
    /// Stop when the Euclidean norm of the direction drops to this value.
    pub d_tol: T,
    pub max_iters: usize,
    /// `x^{-1} = x^0 − offset·(1, …, 1)` seeds the first BB ratio.
    pub x_minus_offset: T,
    /// Keep every iterate in the trace.
    pub record_iterates: bool,
}

impl<T: Scalar> SolverConfig<T> {
    pub fn new(algorithm: Algorithm<T>) -> Self {
        Self {
            algorithm,
            bb: BbConfig::default(),
            line_search: LineSearchConfig::default(),
            fw: FwConfig::default(),
            d_tol: T::lit(1e-6),
            max_iters: 500,
            x_minus_offset: T::lit(1e-4),
            record_iterates: false,
        }
    }

    pub fn with_d_tol(mut self, d_tol: T) -> Self {
        self.d_tol = d_tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn recording_iterates(mut self) -> Self {
        self.record_iterates = true;
        self
    }

    /// Checks the configuration against a problem.
    pub fn validate(&self, problem: &McoProblem<T>) -> Result<()> {
        self.bb.validate()?;
        self.line_search.validate()?;
        if !(self.d_tol > T::zero()) || self.max_iters == 0 || !(self.fw.gap_tol > T::zero()) {
            return Err(Error::InvalidInput(
                "d_tol, max_iters and gap_tol must be positive".into(),
            ));
        }
        if self.algorithm.uses_bb() && !(self.x_minus_offset != T::zero()) {
            return Err(Error::InvalidInput("x_minus_offset must be nonzero".into()));
        }
        let positive = |v: &[T]| v.iter().all(|&a| a > T::zero() && a.is_finite());
        match self.algorithm {
            Algorithm::PgmoLineSearch { ell } if !(ell > T::zero()) => {
                Err(Error::InvalidInput("ell must be positive".into()))
            }
            Algorithm::PgmoFixed { ell } => {
                let l_max = problem.lipschitz_max().ok_or_else(|| {
                    Error::InvalidInput("fixed-step PGMO needs every Lipschitz constant".into())
                })?;
                if ell > l_max / T::lit(2.0) {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!(
                        "fixed-step PGMO needs ell > L_max/2 = {}",
                        l_max / T::lit(2.0)
                    )))
                }
            }
            Algorithm::PgmoSeparate => match problem.lipschitz_constants() {
                Some(ls) if positive(&ls) => Ok(()),
                _ => Err(Error::InvalidInput(
                    "per-objective PGMO needs positive Lipschitz constants".into(),
                )),
            },
            Algorithm::PgmoStrongConvexity => match problem.strong_convexity_moduli() {
                Some(mus) if positive(&mus) => Ok(()),
                _ => Err(Error::InvalidInput(
                    "PGMO with α = μ needs positive strong convexity moduli".into(),
                )),
            },
            Algorithm::AdaptiveBbpgmo { tau } if !(tau > T::one()) => {
                Err(Error::InvalidInput("tau must exceed 1".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    CriticalPoint,
    MaxIters,
    /// The line search failed where the predicted decrease of some objective
    /// is below the rounding level of its value.
    PrecisionLimit,
    LineSearchFailure,
    DualFailure,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::CriticalPoint => "critical_point",
            Self::MaxIters => "max_iters",
            Self::PrecisionLimit => "precision_limit",
            Self::LineSearchFailure => "line_search_failure",
            Self::DualFailure => "dual_failure",
        }
    }

    /// Hard failures abort a run; the iteration limit and the precision limit do not.
    pub fn is_failure(&self) -> bool {
        matches!(self, Self::LineSearchFailure | Self::DualFailure)
    }
}

/// One accepted step `x^k → x^{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    pub d_norm: T,
    pub t: T,
    /// Largest admissible step along `d` inside the bounds.
    pub t_cap: T,
    /// Weights used for the accepted direction (after any adaptive repair).
    pub alphas: Vec<T>,
    pub lambda: Vec<T>,
    pub model_decrease: Vec<T>,
    pub fw_gap: T,
    pub dual_converged: bool,
    /// `F(x^{k+1})`
    pub f: Vec<T>,
    /// Objective-vector evaluations spent on this step.
    pub evals: usize,
    pub backtracks: usize,
    /// Per objective, how often `α_i` was multiplied by `τ` (adaptive only).
    pub inflations: Vec<usize>,
    /// `x^{k+1}`, when iterates are recorded.
    pub x: Option<Vec<T>>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub status: Status,
    pub x0: Vec<T>,
    /// The start was outside the domain of `g` and was projected onto it.
    pub start_projected: bool,
    pub f0: Vec<T>,
    pub final_x: Vec<T>,
    pub final_f: Vec<T>,
    pub iters: usize,
    pub counters: EvalCounters,
    pub trace: Vec<IterationRecord<T>>,
    /// Last direction computed, the one that triggered termination.
    pub final_direction: Option<DirectionResult<T>>,
    /// Weights used for [`SolveReport::final_direction`].
    pub final_alphas: Vec<T>,
    /// Dual solves that returned a usable but unconverged direction.
    pub dual_warnings: usize,
    pub message: Option<String>,
    pub total_time: Duration,
}

impl<T: Scalar> SolveReport<T> {
    /// Objective-vector evaluations spent on steps (initial evaluation excluded).
    pub fn feval(&self) -> usize {
        self.trace.iter().map(|r| r.evals).sum()
    }

    /// Mean accepted stepsize, `None` when no step was taken.
    pub fn mean_stepsize(&self) -> Option<T> {
        if self.trace.is_empty() {
            None
        } else {
            let total: T = self.trace.iter().map(|r| r.t).sum();
            Some(total / T::from_usize_lossy(self.trace.len()))
        }
    }
}

/// Mutable state of a run.
#[derive(Debug, Clone)]
pub struct IterateState<T> {
    pub x: Vec<T>,
    /// `F(x)`
    pub f: Vec<T>,
    /// smooth parts `f_i(x)`
    pub smooth: Vec<T>,
    /// nonsmooth parts `g_i(x)`
    pub nonsmooth: Vec<T>,
    pub grads: Matrix<T>,
    pub bb_mem: Option<BbMemory<T>>,
    pub alphas: Vec<T>,
    pub last: Option<DirectionResult<T>>,
    pub t: T,
}

struct Run<'a, T> {
    problem: &'a McoProblem<T>,
    cfg: &'a SolverConfig<T>,
    counters: EvalCounters,
    dual_warnings: usize,
    started: Instant,
}

enum Outcome<T> {
    Continue(IterationRecord<T>, Vec<T>, Vec<T>, Vec<T>),
    Stop(Status, String),
}

impl<'a, T: Scalar> Run<'a, T> {
    fn alphas(&self, state: &IterateState<T>) -> Vec<T> {
        let m = self.problem.m();
        match self.cfg.algorithm {
            Algorithm::PgmoLineSearch { ell } | Algorithm::PgmoFixed { ell } => vec![ell; m],
            Algorithm::PgmoSeparate => self.problem.lipschitz_constants().unwrap_or_default(),
            Algorithm::PgmoStrongConvexity => {
                self.problem.strong_convexity_moduli().unwrap_or_default()
            }
            Algorithm::Bbpgmo | Algorithm::AdaptiveBbpgmo { .. } => {
                let mem = state.bb_mem.as_ref().expect("BB memory initialized");
                compute_alphas(mem, &state.x, &state.grads, &self.cfg.bb).unwrap_or_else(|_| {
                    if state.alphas.len() == m {
                        state.alphas.clone()
                    } else {
                        vec![self.cfg.bb.alpha_min; m]
                    }
                })
            }
        }
    }

    /// Solves the subproblem; unconverged duals are kept when they still give
    /// descent for every objective.
    fn direction(
        &mut self,
        state: &IterateState<T>,
        alphas: &[T],
        warm: Option<&[T]>,
    ) -> std::result::Result<DirectionResult<T>, String> {
        let inp = SubproblemInput {
            x: &state.x,
            grads: &state.grads,
            g_at_x: &state.nonsmooth,
            alphas,
            family: self.problem.nonsmooth(),
        };
        let res = frank_wolfe_solve_from(&inp, &self.cfg.fw, warm);
        let dir = match res {
            Ok(dir) => dir,
            Err(DualError::NotConverged { gap, best }) => {
                if usable(&best, alphas) {
                    self.dual_warnings += 1;
                    *best
                } else {
                    self.counters.prox_evals += best.prox_evals;
                    return Err(format!("dual solve did not converge (gap {gap})"));
                }
            }
            Err(DualError::Eval(e)) => return Err(e.to_string()),
        };
        self.counters.prox_evals += dir.prox_evals;
        Ok(dir)
    }

    fn step(
        &mut self,
        state: &IterateState<T>,
        dir: &DirectionResult<T>,
        alphas: &[T],
    ) -> Outcome<T> {
        let problem = self.problem;
        let t_cap = match max_feasible_step(&state.x, &dir.d, problem.bounds()) {
            Ok(t) => t,
            Err(e) => return Outcome::Stop(Status::LineSearchFailure, e.to_string()),
        };
        if !(t_cap > T::zero()) {
            return Outcome::Stop(
                Status::CriticalPoint,
                "no feasible progress along the direction".into(),
            );
        }
        let m = problem.m();
        let mut record = IterationRecord {
            d_norm: dir.d_norm(),
            t: t_cap,
            t_cap,
            alphas: alphas.to_vec(),
            lambda: dir.lambda.clone(),
            model_decrease: dir.model_decrease.clone(),
            fw_gap: dir.fw_gap,
            dual_converged: dir.converged,
            f: Vec::new(),
            evals: 0,
            backtracks: 0,
            inflations: vec![0; m],
            x: None,
            elapsed: Duration::ZERO,
        };

        if self.cfg.algorithm.uses_armijo() {
            let res = armijo_search(
                problem,
                &state.x,
                &dir.d,
                &state.f,
                &dir.model_decrease,
                &self.cfg.line_search,
                t_cap,
                &mut self.counters,
            );
            match res {
                Ok(out) => {
                    record.t = out.t;
                    record.backtracks = out.backtracks;
                    record.evals = out.evals;
                    let (smooth, nonsmooth) = match split(problem, &out.x_new, &out.f_new) {
                        Ok(parts) => parts,
                        Err(e) => return Outcome::Stop(Status::LineSearchFailure, e.to_string()),
                    };
                    record.f = out.f_new;
                    Outcome::Continue(record, out.x_new, smooth, nonsmooth)
                }
                Err(fail) if below_resolution(&dir.model_decrease, &state.f) => Outcome::Stop(
                    Status::PrecisionLimit,
                    format!("predicted decrease below floating-point resolution of F ({fail})"),
                ),
                Err(fail) => Outcome::Stop(Status::LineSearchFailure, fail.to_string()),
            }
        } else if let Algorithm::AdaptiveBbpgmo { tau } = self.cfg.algorithm {
            self.adaptive_step(state, dir, alphas, tau, record)
        } else {
            let x_new = trial_point(&state.x, t_cap, &dir.d, problem.bounds());
            record.evals = 1;
            match problem.evaluate_parts(&x_new, &mut self.counters) {
                Ok((smooth, nonsmooth)) => {
                    record.f = sum_parts(&smooth, &nonsmooth);
                    Outcome::Continue(record, x_new, smooth, nonsmooth)
                }
                Err(e) => Outcome::Stop(Status::LineSearchFailure, e.to_string()),
            }
        }
    }

    /// Inflates `α_i ← τ·α_i` for every objective whose quadratic upper bound
    /// fails at the trial point and re-solves, until all bounds hold.
    fn adaptive_step(
        &mut self,
        state: &IterateState<T>,
        dir: &DirectionResult<T>,
        alphas: &[T],
        tau: T,
        mut record: IterationRecord<T>,
    ) -> Outcome<T> {
        let problem = self.problem;
        let mut alphas = alphas.to_vec();
        let mut dir = dir.clone();
        for _ in 0..MAX_INFLATION_ROUNDS {
            let t_cap = match max_feasible_step(&state.x, &dir.d, problem.bounds()) {
                Ok(t) => t,
                Err(e) => return Outcome::Stop(Status::LineSearchFailure, e.to_string()),
            };
            let x_new = trial_point(&state.x, t_cap, &dir.d, problem.bounds());
            record.evals += 1;
            let (smooth, nonsmooth) = match problem.evaluate_parts(&x_new, &mut self.counters) {
                Ok(parts) => parts,
                Err(e) => return Outcome::Stop(Status::LineSearchFailure, e.to_string()),
            };
            let step = linalg::sub(&x_new, &state.x);
            let step_sq = linalg::norm_sq(&step);
            let lin = state.grads.mul_vec(&step);
            let abs_step: Vec<T> = step.iter().map(|v| v.abs()).collect();
            // a-priori rounding bound for the two sides, so that a bound holding
            // with equality (α_i = L_i on a quadratic) is not decided by rounding
            let gamma = T::from_usize_lossy(problem.n() + 4) * T::epsilon();
            let mut violated = false;
            for i in 0..problem.m() {
                let bound = lin[i] + alphas[i] / T::lit(2.0) * step_sq;
                let lin_mag: T = state
                    .grads
                    .row(i)
                    .iter()
                    .zip(&abs_step)
                    .map(|(&g, &s)| g.abs() * s)
                    .sum();
                let slack = gamma
                    * (smooth[i].abs() + state.smooth[i].abs() + lin_mag + alphas[i] * step_sq);
                if smooth[i] - state.smooth[i] > bound + slack {
                    alphas[i] = alphas[i] * tau;
                    record.inflations[i] += 1;
                    violated = true;
                }
            }
            if !violated {
                record.t = t_cap;
                record.t_cap = t_cap;
                record.d_norm = dir.d_norm();
                record.alphas = alphas;
                record.lambda = dir.lambda;
                record.model_decrease = dir.model_decrease;
                record.fw_gap = dir.fw_gap;
                record.dual_converged = dir.converged;
                record.f = sum_parts(&smooth, &nonsmooth);
                return Outcome::Continue(record, x_new, smooth, nonsmooth);
            }
            let warm = dir.lambda.clone();
            dir = match self.direction(state, &alphas, Some(&warm)) {
                Ok(d) => d,
                Err(msg) => return Outcome::Stop(Status::DualFailure, msg),
            };
        }
        Outcome::Stop(
            Status::LineSearchFailure,
            "adaptive weights did not settle".into(),
        )
    }
}

fn sum_parts<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

/// Recovers `(f, g)` at an accepted Armijo point from `F` without
/// re-evaluating the smooth parts.
fn split<T: Scalar>(problem: &McoProblem<T>, x: &[T], f_total: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    let g = problem.evaluate_nonsmooth(x)?;
    let smooth = f_total.iter().zip(&g).map(|(&f, &gi)| f - gi).collect();
    Ok((smooth, g))
}

/// `model_decrease_i ≤ −α_i‖d‖² + tol` for all `i`.
pub fn certificate_holds<T: Scalar>(dir: &DirectionResult<T>, alphas: &[T], tol: T) -> bool {
    let dd = linalg::norm_sq(&dir.d);
    dir.model_decrease
        .iter()
        .zip(alphas)
        .all(|(&md, &a)| md <= -a * dd + tol)
}

/// Some objective's predicted decrease is too small to be seen in `F_i`, so
/// the sufficient-decrease test for it is decided by rounding.
fn below_resolution<T: Scalar>(model_decrease: &[T], f: &[T]) -> bool {
    model_decrease
        .iter()
        .zip(f)
        .any(|(&md, &fi)| md.abs() <= T::lit(16.0) * T::epsilon() * fi.abs())
}

/// An unconverged direction is still used when every objective gets at least
/// half the decrease an exact solve guarantees.
fn usable<T: Scalar>(dir: &DirectionResult<T>, alphas: &[T]) -> bool {
    let dd = linalg::norm_sq(&dir.d);
    dd > T::zero()
        && dir
            .model_decrease
            .iter()
            .zip(alphas)
            .all(|(&md, &a)| md <= -T::lit(0.5) * a * dd)
}

/// Runs one algorithm from `x0`.
///
/// Configuration and dimension errors are returned as `Err`; failures during
/// the run end it with the corresponding [`Status`] and keep partial results.
pub fn solve<T: Scalar>(
    problem: &McoProblem<T>,
    x0: &[T],
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    cfg.validate(problem)?;
    check_len(problem.n(), x0.len())?;
    let started = Instant::now();
    let mut run = Run {
        problem,
        cfg,
        counters: EvalCounters::default(),
        dual_warnings: 0,
        started,
    };

    let start_projected = !problem.is_feasible(x0);
    let x = if start_projected {
        problem.nonsmooth().project_domain(x0)
    } else {
        x0.to_vec()
    };
    let (smooth, nonsmooth) = problem.evaluate_parts(&x, &mut run.counters)?;
    let grads = problem.jacobian(&x, &mut run.counters)?;
    let bb_mem = if cfg.algorithm.uses_bb() {
        let prev_x: Vec<T> = x.iter().map(|&v| v - cfg.x_minus_offset).collect();
        let prev_grads = problem.jacobian(&prev_x, &mut run.counters)?;
        Some(BbMemory { prev_x, prev_grads })
    } else {
        None
    };
    let f0 = sum_parts(&smooth, &nonsmooth);
    let mut state = IterateState {
        x,
        f: f0.clone(),
        smooth,
        nonsmooth,
        grads,
        bb_mem,
        alphas: Vec::new(),
        last: None,
        t: T::zero(),
    };

    let mut trace = Vec::new();
    let mut message = None;
    let status = loop {
        let alphas = run.alphas(&state);
        let dir = match run.direction(&state, &alphas, None) {
            Ok(d) => d,
            Err(msg) => {
                message = Some(msg);
                break Status::DualFailure;
            }
        };
        state.alphas = alphas.clone();
        let small = !(dir.d_norm() > cfg.d_tol);
        state.last = Some(dir);
        if small {
            break Status::CriticalPoint;
        }
        if trace.len() >= cfg.max_iters {
            break Status::MaxIters;
        }
        let dir = state.last.as_ref().expect("direction just stored");
        match run.step(&state, dir, &alphas) {
            Outcome::Continue(mut record, x_new, smooth, nonsmooth) => {
                let grads_new = match problem.jacobian(&x_new, &mut run.counters) {
                    Ok(g) => g,
                    Err(e) => {
                        message = Some(e.to_string());
                        break Status::LineSearchFailure;
                    }
                };
                if cfg.algorithm.uses_bb() {
                    state.bb_mem = Some(BbMemory {
                        prev_x: std::mem::take(&mut state.x),
                        prev_grads: std::mem::replace(&mut state.grads, grads_new),
                    });
                } else {
                    state.grads = grads_new;
                }
                state.x = x_new;
                state.t = record.t;
                state.f = record.f.clone();
                state.smooth = smooth;
                state.nonsmooth = nonsmooth;
                if cfg.record_iterates {
                    record.x = Some(state.x.clone());
                }
                record.elapsed = run.started.elapsed();
                trace.push(record);
            }
            Outcome::Stop(status, msg) => {
                message = Some(msg);
                break status;
            }
        }
    };

    Ok(SolveReport {
        status,
        x0: x0.to_vec(),
        start_projected,
        f0,
        iters: trace.len(),
        final_x: state.x,
        final_f: state.f,
        counters: run.counters,
        trace,
        final_direction: state.last,
        final_alphas: state.alphas,
        dual_warnings: run.dual_warnings,
        message,
        total_time: started.elapsed(),
    })
}

/// Independent solves from each start, in input order. Runs in parallel.
pub fn pareto_sweep<T: Scalar>(
    problem: &McoProblem<T>,
    starts: &[Vec<T>],
    cfg: &SolverConfig<T>,
) -> Vec<Result<SolveReport<T>>> {
    starts
        .par_iter()
        .map(|x0| solve(problem, x0, cfg))
        .collect()
}
