//! Direction-finding subproblem and its dual.
//!
//! For weights `α ∈ ℝ^m_{++}` the direction at `x` is `d = P − x`, where `P`
//! minimizes
//!
//! ```text
//! max_i (⟨∇f_i(x), y − x⟩ + g_i(y) − g_i(x)) / α_i + ½‖y − x‖²
//! ```
//!
//! over `y`. The dual is the minimization over the unit simplex of
//!
//! ```text
//! ω(λ) = ½‖a‖² + Σ_i λ_i g_i(x)/α_i − M(x − a),   a = Σ_i λ_i ∇f_i(x)/α_i,
//! ```
//!
//! with `M` the Moreau envelope of `Σ_i λ_i g_i/α_i`, and the primal point is
//! recovered as `P(λ) = Prox_{Σ λ_i g_i/α_i}(x − a)`. The dual is solved by
//! Frank-Wolfe with an exact segment search.

use thiserror::Error;

use crate::error::{check_len, Error, Result};
use crate::linalg::{self, Matrix};
use crate::problem::NonsmoothFamily;
use crate::Scalar;

/// Data of one subproblem at the point `x`.
#[derive(Debug, Clone, Copy)]
pub struct SubproblemInput<'a, T> {
    pub x: &'a [T],
    /// Row `i` is `∇f_i(x)`.
    pub grads: &'a Matrix<T>,
    /// `g_i(x)`; must be finite.
    pub g_at_x: &'a [T],
    pub alphas: &'a [T],
    pub family: &'a NonsmoothFamily<T>,
}

impl<'a, T: Scalar> SubproblemInput<'a, T> {
    pub fn m(&self) -> usize {
        self.grads.rows()
    }

    fn validate(&self) -> Result<()> {
        let m = self.m();
        check_len(m, self.g_at_x.len())?;
        check_len(m, self.alphas.len())?;
        check_len(self.x.len(), self.grads.cols())?;
        if self
            .alphas
            .iter()
            .any(|&a| !(a > T::zero()) || !a.is_finite())
        {
            return Err(Error::InvalidInput(
                "subproblem weights must be positive".into(),
            ));
        }
        if let Some(i) = self.g_at_x.iter().position(|v| !v.is_finite()) {
            return Err(Error::Infeasible { objective: i });
        }
        Ok(())
    }
}

/// Frank-Wolfe stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwConfig<T> {
    /// Gap tolerance, relative to `‖d‖²` (the scale of `ω` near the optimum).
    pub gap_tol: T,
    pub max_iters: usize,
}

impl<T: Scalar> Default for FwConfig<T> {
    fn default() -> Self {
        Self {
            gap_tol: T::lit(1e-10),
            max_iters: 2000,
        }
    }
}

/// Solution of one direction subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionResult<T> {
    pub d: Vec<T>,
    pub lambda: Vec<T>,
    /// `−ω(λ)`, the dual objective at the returned weights.
    pub dual_value: T,
    pub fw_gap: T,
    /// `⟨∇f_i(x), d⟩ + g_i(x + d) − g_i(x)` per objective.
    pub model_decrease: Vec<T>,
    pub fw_iters: usize,
    pub prox_evals: u64,
    pub converged: bool,
}

impl<T: Scalar> DirectionResult<T> {
    pub fn d_norm(&self) -> T {
        linalg::norm(&self.d)
    }

    /// Primal objective `max_i model_decrease_i/α_i + ½‖d‖²` at the returned direction.
    pub fn primal_value(&self, alphas: &[T]) -> T {
        let worst = self
            .model_decrease
            .iter()
            .zip(alphas)
            .map(|(&md, &a)| md / a)
            .fold(T::neg_infinity(), T::max);
        worst + T::lit(0.5) * linalg::norm_sq(&self.d)
    }
}

/// Dual solve failure.
#[derive(Debug, Error)]
pub enum DualError<T: Scalar> {
    #[error(transparent)]
    Eval(#[from] Error),
    /// The iteration budget ran out with the gap above `100·gap_tol`. The best
    /// weights found and their direction are attached.
    #[error("dual solve did not converge: gap {gap} after {} iterations", best.fw_iters)]
    NotConverged {
        gap: T,
        best: Box<DirectionResult<T>>,
    },
}

impl<T: Scalar> From<DualError<T>> for Error {
    fn from(e: DualError<T>) -> Self {
        match e {
            DualError::Eval(e) => e,
            DualError::NotConverged { gap, best } => Error::DualNotConverged {
                gap: gap.as_f64(),
                iters: best.fw_iters,
            },
        }
    }
}

/// Evaluation of `ω` and friends for one subproblem, with prox counting.
struct Dual<'a, T> {
    inp: SubproblemInput<'a, T>,
    prox_evals: u64,
}

/// Everything derived from one prox evaluation at weights `λ`.
struct DualPoint<T> {
    d: Vec<T>,
    /// `⟨∇f_i(x), d⟩ + g_i(P) − g_i(x)`
    model: Vec<T>,
    omega: T,
    /// `∂ω/∂λ_i = −model_i / α_i`
    grad: Vec<T>,
    /// Rounding level of the entries of `grad`.
    noise: T,
}

impl<T: Scalar> DualPoint<T> {
    /// Gap below which the solve counts as converged.
    fn gap_target(&self, gap_tol: T) -> T {
        gap_tol * linalg::norm_sq(&self.d) + self.noise
    }
}

impl<'a, T: Scalar> Dual<'a, T> {
    fn new(inp: SubproblemInput<'a, T>) -> Self {
        Self { inp, prox_evals: 0 }
    }

    fn prox_weights(&self, lambda: &[T]) -> Vec<T> {
        lambda
            .iter()
            .zip(self.inp.alphas)
            .map(|(&l, &a)| l / a)
            .collect()
    }

    /// `x − Σ λ_i ∇f_i/α_i` and `P(λ)`.
    fn prox_point(&mut self, lambda: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        let w = self.prox_weights(lambda);
        let a = self.inp.grads.weighted_row_sum(&w);
        let v = linalg::sub(self.inp.x, &a);
        self.prox_evals += 1;
        let p = self.inp.family.combined_prox(&w, &v)?;
        Ok((v, p))
    }

    fn g_values(&self, p: &[T]) -> Result<Vec<T>> {
        (0..self.inp.m())
            .map(|i| {
                self.inp
                    .family
                    .value(i, p)
                    .finite()
                    .ok_or(Error::Infeasible { objective: i })
            })
            .collect()
    }

    fn at(&mut self, lambda: &[T]) -> Result<DualPoint<T>> {
        let (_, p) = self.prox_point(lambda)?;
        let d = linalg::sub(&p, self.inp.x);
        let g_at_p = self.g_values(&p)?;
        let mut noise = T::zero();
        let mut model = Vec::with_capacity(self.inp.m());
        for (i, row) in self.inp.grads.iter_rows().enumerate() {
            let lin = linalg::dot(row, &d);
            // d = P − x carries the rounding of x, amplified by ∇f_i
            let mag: T = row
                .iter()
                .zip(d.iter().zip(self.inp.x))
                .map(|(&a, (&dj, &xj))| a.abs() * (dj.abs() + xj.abs()))
                .sum();
            let gx = self.inp.g_at_x[i];
            noise = noise.max((mag + g_at_p[i].abs() + gx.abs()) / self.inp.alphas[i]);
            model.push(lin + g_at_p[i] - gx);
        }
        let grad: Vec<T> = model
            .iter()
            .zip(self.inp.alphas)
            .map(|(&md, &a)| -md / a)
            .collect();
        // ω(λ) = ½‖a‖² − ½‖P − v‖² + Σ w_i (g_i(x) − g_i(P)); with P − v = d + a this
        // is −(Σ λ_i model_i/α_i + ½‖d‖²), which avoids cancelling ½‖a‖².
        let weighted: T = lambda.iter().zip(&grad).map(|(&l, &gi)| l * gi).sum();
        let omega = weighted - T::lit(0.5) * linalg::norm_sq(&d);
        Ok(DualPoint {
            d,
            model,
            omega,
            grad,
            noise: T::lit(16.0) * T::epsilon() * noise,
        })
    }
}

fn check_simplex<T: Scalar>(lambda: &[T], m: usize) -> Result<()> {
    check_len(m, lambda.len())?;
    let sum: T = lambda.iter().copied().sum();
    if lambda.iter().any(|&l| l < T::zero()) || (sum - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::InvalidInput(
            "weights must lie on the unit simplex".into(),
        ));
    }
    Ok(())
}

/// `ω(λ)`, with the envelope evaluated as the value at the prox point plus half
/// the squared distance.
pub fn omega_value<T: Scalar>(inp: &SubproblemInput<'_, T>, lambda: &[T]) -> Result<T> {
    inp.validate()?;
    check_simplex(lambda, inp.m())?;
    let mut dual = Dual::new(*inp);
    let w = dual.prox_weights(lambda);
    let (v, p) = dual.prox_point(lambda)?;
    let g_at_p = dual.g_values(&p)?;
    let a = linalg::sub(inp.x, &v);
    let envelope = linalg::dot(&w, &g_at_p) + T::lit(0.5) * linalg::norm_sq(&linalg::sub(&p, &v));
    Ok(T::lit(0.5) * linalg::norm_sq(&a) + linalg::dot(&w, inp.g_at_x) - envelope)
}

/// `∇ω(λ)_i = g_i(x)/α_i − ⟨∇f_i(x)/α_i, P(λ) − x⟩ − g_i(P(λ))/α_i`.
pub fn omega_gradient<T: Scalar>(inp: &SubproblemInput<'_, T>, lambda: &[T]) -> Result<Vec<T>> {
    inp.validate()?;
    check_simplex(lambda, inp.m())?;
    Ok(Dual::new(*inp).at(lambda)?.grad)
}

/// `d = Prox_{Σ λ_i g_i/α_i}(x − Σ λ_i ∇f_i/α_i) − x`.
pub fn recover_direction<T: Scalar>(inp: &SubproblemInput<'_, T>, lambda: &[T]) -> Result<Vec<T>> {
    inp.validate()?;
    check_simplex(lambda, inp.m())?;
    let (_, p) = Dual::new(*inp).prox_point(lambda)?;
    Ok(linalg::sub(&p, inp.x))
}

/// Solves the dual from uniform weights.
pub fn frank_wolfe_solve<T: Scalar>(
    inp: &SubproblemInput<'_, T>,
    cfg: &FwConfig<T>,
) -> Result<DirectionResult<T>, DualError<T>> {
    frank_wolfe_solve_from(inp, cfg, None)
}

const SEGMENT_ITERS: usize = 64;

/// Solves the dual starting from `warm` (or uniform weights).
///
/// Pairwise Frank-Wolfe: each step shifts weight from the used vertex with
/// the largest partial derivative to the vertex with the smallest, with an
/// exact segment search, so for `m = 2` a single step reaches the optimum. The
/// solve counts as converged once the Frank-Wolfe gap is at most
/// `gap_tol·‖d‖²` plus the rounding level of the derivatives.
pub fn frank_wolfe_solve_from<T: Scalar>(
    inp: &SubproblemInput<'_, T>,
    cfg: &FwConfig<T>,
    warm: Option<&[T]>,
) -> Result<DirectionResult<T>, DualError<T>> {
    inp.validate()?;
    let m = inp.m();
    let mut dual = Dual::new(*inp);
    let mut lambda = match warm {
        Some(w) if w.len() == m && check_simplex(w, m).is_ok() => w.to_vec(),
        _ => vec![T::one() / T::from_usize_lossy(m); m],
    };

    let mut iters = 0;
    let mut point = dual.at(&lambda)?;
    let mut gap;
    let mut converged;
    loop {
        let j = best_vertex(&point.grad);
        gap = fw_gap(&lambda, &point.grad, j);
        converged = gap <= point.gap_target(cfg.gap_tol);
        if converged || iters >= cfg.max_iters {
            break;
        }
        iters += 1;
        let k = away_vertex(&lambda, &point.grad);
        let (next, next_point) = segment_search(&mut dual, &lambda, j, k)?;
        if next == lambda || !(next_point.omega < point.omega) {
            // no representable improvement along the segment
            converged = true;
            break;
        }
        lambda = next;
        point = next_point;
    }

    let target = point.gap_target(cfg.gap_tol);
    let result = DirectionResult {
        dual_value: -point.omega,
        fw_gap: gap.max(T::zero()),
        model_decrease: point.model,
        d: point.d,
        lambda,
        fw_iters: iters,
        prox_evals: dual.prox_evals,
        converged,
    };
    if !converged && gap > T::lit(100.0) * target {
        return Err(DualError::NotConverged {
            gap,
            best: Box::new(result),
        });
    }
    Ok(result)
}

/// Index of the smallest partial derivative.
fn best_vertex<T: Scalar>(grad: &[T]) -> usize {
    let mut j = 0;
    for (i, &g) in grad.iter().enumerate() {
        if g < grad[j] {
            j = i;
        }
    }
    j
}

/// `⟨∇ω(λ), λ − e_j⟩`
fn fw_gap<T: Scalar>(lambda: &[T], grad: &[T], j: usize) -> T {
    linalg::dot(lambda, grad) - grad[j]
}

/// Index of the largest partial derivative among the weights in use.
fn away_vertex<T: Scalar>(lambda: &[T], grad: &[T]) -> usize {
    let mut k = None;
    for (i, (&l, &g)) in lambda.iter().zip(grad).enumerate() {
        if l > T::zero() && k.map_or(true, |k: usize| g > grad[k]) {
            k = Some(i);
        }
    }
    k.unwrap_or(0)
}

/// `λ + η(e_j − e_k)`, with the weight of `k` set to exactly zero at `η = λ_k`.
fn shifted<T: Scalar>(lambda: &[T], eta: T, j: usize, k: usize) -> Vec<T> {
    let mut out = lambda.to_vec();
    if eta >= lambda[k] {
        out[j] = out[j] + lambda[k];
        out[k] = T::zero();
    } else {
        out[j] = out[j] + eta;
        out[k] = out[k] - eta;
    }
    out
}

/// Pairwise step: moves weight from the away vertex `k` to the best vertex `j`
/// and minimizes `ω` on that segment by bisection on the slope
/// `∂ω/∂λ_j − ∂ω/∂λ_k`, which is nondecreasing along it. For two objectives this
/// is the segment from `λ` to `e_j`.
fn segment_search<T: Scalar>(
    dual: &mut Dual<'_, T>,
    lambda: &[T],
    j: usize,
    k: usize,
) -> Result<(Vec<T>, DualPoint<T>)> {
    let slope = |p: &DualPoint<T>| -> T { p.grad[j] - p.grad[k] };
    let eta_max = lambda[k];
    let end = shifted(lambda, eta_max, j, k);
    let at_end = dual.at(&end)?;
    if slope(&at_end) <= T::zero() {
        return Ok((end, at_end));
    }
    let (mut lo, mut hi) = (T::zero(), eta_max);
    let mut best: Option<(Vec<T>, DualPoint<T>)> = None;
    for _ in 0..SEGMENT_ITERS {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let trial = shifted(lambda, mid, j, k);
        let p = dual.at(&trial)?;
        let sl = slope(&p);
        if sl < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        best = Some((trial, p));
        if sl == T::zero() {
            break;
        }
    }
    match best {
        Some(b) => Ok(b),
        None => Ok((end, at_end)),
    }
}
