//! Problem abstraction: `F_i = f_i + g_i` with smooth `f_i` and a shared
//! nonsmooth family `g`, plus evaluation counting.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_len, Error, Result};
use crate::linalg::{self, Matrix};
use crate::prox::{clamp_box, combined_prox_dispatch, ProxKind};
use crate::Scalar;

pub type ValueFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;
pub type GradientFn<T> = Arc<dyn Fn(&[T], &mut [T]) + Send + Sync>;

/// A continuously differentiable objective `f_i` with optional curvature bounds.
#[derive(Clone)]
pub struct SmoothComponent<T> {
    value: ValueFn<T>,
    gradient: GradientFn<T>,
    lipschitz: Option<T>,
    strong_convexity: Option<T>,
}

impl<T: Scalar> SmoothComponent<T> {
    pub fn new(
        value: impl Fn(&[T]) -> T + Send + Sync + 'static,
        gradient: impl Fn(&[T], &mut [T]) + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            lipschitz: None,
            strong_convexity: None,
        }
    }

    /// Records the Lipschitz constant `L_i` of the gradient.
    pub fn with_lipschitz(mut self, l: T) -> Self {
        self.lipschitz = Some(l);
        self
    }

    /// Records the strong convexity modulus `μ_i`.
    pub fn with_strong_convexity(mut self, mu: T) -> Self {
        self.strong_convexity = Some(mu);
        self
    }

    pub fn lipschitz(&self) -> Option<T> {
        self.lipschitz
    }

    pub fn strong_convexity(&self) -> Option<T> {
        self.strong_convexity
    }

    pub fn value(&self, x: &[T]) -> T {
        (self.value)(x)
    }

    pub fn gradient_into(&self, x: &[T], out: &mut [T]) {
        (self.gradient)(x, out)
    }
}

impl<T: fmt::Debug> fmt::Debug for SmoothComponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothComponent")
            .field("lipschitz", &self.lipschitz)
            .field("strong_convexity", &self.strong_convexity)
            .finish_non_exhaustive()
    }
}

/// Value in `ℝ ∪ {+∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal<T> {
    Finite(T),
    Infinite,
}

impl<T: Copy> ExtReal<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }
}

/// Box `[lower, upper]` with `lower < upper` componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    pub lower: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        check_len(lower.len(), upper.len())?;
        if let Some(j) = (0..lower.len()).find(|&j| !(lower[j] < upper[j])) {
            return Err(Error::InvalidInput(format!(
                "bounds must satisfy lower < upper (coordinate {j})"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(n: usize, lower: T, upper: T) -> Result<Self> {
        Self::new(vec![lower; n], vec![upper; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }

    pub fn clamp(&self, x: &[T]) -> Vec<T> {
        clamp_box(x, &self.lower, &self.upper)
    }
}

/// Slack used when testing membership of an indicator's domain, so rounding in
/// `x + t·d` does not flip a feasible iterate to `+∞`.
fn domain_slack<T: Scalar>(n: usize) -> T {
    T::lit(1e-9) * T::from_usize_lossy(n.max(1)).sqrt()
}

/// The nonsmooth parts `g_1, …, g_m`, all of one kind, optionally restricted to
/// the problem's variable bounds.
///
/// When a problem carries bounds, each `g_i` is taken to be `g_i + I_box`: the
/// box enters the direction subproblem, so every search direction is a feasible
/// direction and the bounded line search never starts from a zero step. For the
/// separable kinds (zero, weighted ℓ1, box) the prox of the restricted sum is the
/// clamp of the unrestricted prox.
#[derive(Debug, Clone, PartialEq)]
pub struct NonsmoothFamily<T> {
    kind: ProxKind<T>,
    m: usize,
    restrict: Option<Bounds<T>>,
}

impl<T: Scalar> NonsmoothFamily<T> {
    pub fn new(kind: ProxKind<T>, m: usize, restrict: Option<Bounds<T>>) -> Result<Self> {
        if let ProxKind::WeightedL1 { coeffs } = &kind {
            check_len(m, coeffs.len())?;
        }
        if restrict.is_some() && matches!(kind, ProxKind::Simplex) {
            return Err(Error::Unsupported(
                "simplex indicator combined with variable bounds".into(),
            ));
        }
        Ok(Self { kind, m, restrict })
    }

    pub fn kind(&self) -> &ProxKind<T> {
        &self.kind
    }

    pub fn restriction(&self) -> Option<&Bounds<T>> {
        self.restrict.as_ref()
    }

    /// True when some `g_i` takes the value `+∞`.
    pub fn has_indicator(&self) -> bool {
        self.kind.is_indicator() || self.restrict.is_some()
    }

    /// `g_i(x)`
    pub fn value(&self, i: usize, x: &[T]) -> ExtReal<T> {
        let slack = domain_slack::<T>(x.len());
        if let Some(b) = &self.restrict {
            let inside = x
                .iter()
                .zip(b.lower.iter().zip(&b.upper))
                .all(|(&v, (&lo, &hi))| v >= lo - slack && v <= hi + slack);
            if !inside {
                return ExtReal::Infinite;
            }
        }
        match &self.kind {
            ProxKind::Zero => ExtReal::Finite(T::zero()),
            ProxKind::WeightedL1 { coeffs } => {
                ExtReal::Finite(coeffs[i] * x.iter().map(|v| v.abs()).sum())
            }
            ProxKind::Box { lower, upper } => {
                let inside = x
                    .iter()
                    .zip(lower.iter().zip(upper))
                    .all(|(&v, (&lo, &hi))| v >= lo - slack && v <= hi + slack);
                if inside {
                    ExtReal::Finite(T::zero())
                } else {
                    ExtReal::Infinite
                }
            }
            ProxKind::Simplex => {
                let sum: T = x.iter().copied().sum();
                if x.iter().all(|&v| v >= -slack) && (sum - T::one()).abs() <= slack {
                    ExtReal::Finite(T::zero())
                } else {
                    ExtReal::Infinite
                }
            }
        }
    }

    /// Prox of `Σ_i w_i g_i` at `v`.
    pub fn combined_prox(&self, w: &[T], v: &[T]) -> Result<Vec<T>> {
        check_len(self.m, w.len())?;
        let p = combined_prox_dispatch(&self.kind, w, v)?;
        match &self.restrict {
            Some(b) if w.iter().any(|&wi| wi > T::zero()) => Ok(b.clamp(&p)),
            _ => Ok(p),
        }
    }

    /// Nearest point of the common domain of the `g_i`.
    pub fn project_domain(&self, x: &[T]) -> Vec<T> {
        let ones = vec![T::one(); self.m];
        match &self.kind {
            ProxKind::WeightedL1 { .. } | ProxKind::Zero => match &self.restrict {
                Some(b) => b.clamp(x),
                None => x.to_vec(),
            },
            _ => self.combined_prox(&ones, x).unwrap_or_else(|_| x.to_vec()),
        }
    }
}

/// Evaluation counters for one solver run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounters {
    /// Evaluations of individual smooth components `f_i`.
    pub f_evals: u64,
    /// Evaluations of individual gradients `∇f_i`.
    pub grad_evals: u64,
    /// Calls to the combined prox.
    pub prox_evals: u64,
    /// Evaluations of the full vector `F`.
    pub full_evals: u64,
}

impl EvalCounters {
    pub fn merge(&mut self, other: &EvalCounters) {
        self.f_evals += other.f_evals;
        self.grad_evals += other.grad_evals;
        self.prox_evals += other.prox_evals;
        self.full_evals += other.full_evals;
    }
}

/// A multiobjective composite optimization problem.
#[derive(Debug, Clone)]
pub struct McoProblem<T> {
    name: String,
    n: usize,
    smooth: Vec<SmoothComponent<T>>,
    nonsmooth: NonsmoothFamily<T>,
    bounds: Option<Bounds<T>>,
}

impl<T: Scalar> McoProblem<T> {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        smooth: Vec<SmoothComponent<T>>,
        kind: ProxKind<T>,
        bounds: Option<Bounds<T>>,
    ) -> Result<Self> {
        let m = smooth.len();
        if n == 0 || m == 0 {
            return Err(Error::InvalidInput("need n ≥ 1 and m ≥ 1".into()));
        }
        if let Some(b) = &bounds {
            check_len(n, b.dim())?;
        }
        if let ProxKind::Box { lower, .. } = &kind {
            check_len(n, lower.len())?;
        }
        for (i, c) in smooth.iter().enumerate() {
            if let (Some(mu), Some(l)) = (c.strong_convexity, c.lipschitz) {
                if mu > l {
                    return Err(Error::InvalidInput(format!(
                        "objective {i}: strong convexity {mu} exceeds Lipschitz constant {l}"
                    )));
                }
            }
        }
        let nonsmooth = NonsmoothFamily::new(kind, m, bounds.clone())?;
        Ok(Self {
            name: name.into(),
            n,
            smooth,
            nonsmooth,
            bounds,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.smooth.len()
    }

    pub fn smooth(&self) -> &[SmoothComponent<T>] {
        &self.smooth
    }

    pub fn nonsmooth(&self) -> &NonsmoothFamily<T> {
        &self.nonsmooth
    }

    pub fn bounds(&self) -> Option<&Bounds<T>> {
        self.bounds.as_ref()
    }

    /// `L_i` for every objective, if all are known.
    pub fn lipschitz_constants(&self) -> Option<Vec<T>> {
        self.smooth.iter().map(SmoothComponent::lipschitz).collect()
    }

    /// `μ_i` for every objective, if all are known.
    pub fn strong_convexity_moduli(&self) -> Option<Vec<T>> {
        self.smooth
            .iter()
            .map(SmoothComponent::strong_convexity)
            .collect()
    }

    /// `max_i L_i`, if all are known.
    pub fn lipschitz_max(&self) -> Option<T> {
        self.lipschitz_constants()
            .map(|ls| ls.into_iter().fold(T::zero(), T::max))
    }

    /// True when `x` lies in the domain of every `g_i` (and the bounds).
    pub fn is_feasible(&self, x: &[T]) -> bool {
        x.len() == self.n && (0..self.m()).all(|i| self.nonsmooth.value(i, x).is_finite())
    }

    /// `[f_1(x), …, f_m(x)]`
    pub fn evaluate_smooth(&self, x: &[T], counters: &mut EvalCounters) -> Result<Vec<T>> {
        check_len(self.n, x.len())?;
        counters.f_evals += self.m() as u64;
        self.smooth
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let v = c.value(x);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFinite {
                        objective: i,
                        what: "smooth value",
                    })
                }
            })
            .collect()
    }

    /// `[g_1(x), …, g_m(x)]`; `+∞` is reported as [`Error::Infeasible`].
    pub fn evaluate_nonsmooth(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.n, x.len())?;
        (0..self.m())
            .map(|i| {
                self.nonsmooth
                    .value(i, x)
                    .finite()
                    .ok_or(Error::Infeasible { objective: i })
            })
            .collect()
    }

    /// `F(x) = [f_i(x) + g_i(x)]_i`. Counts one full evaluation.
    pub fn evaluate(&self, x: &[T], counters: &mut EvalCounters) -> Result<Vec<T>> {
        let (f, g) = self.evaluate_parts(x, counters)?;
        Ok(f.into_iter().zip(g).map(|(a, b)| a + b).collect())
    }

    /// `(f(x), g(x))` separately; counted like [`McoProblem::evaluate`].
    pub fn evaluate_parts(&self, x: &[T], counters: &mut EvalCounters) -> Result<(Vec<T>, Vec<T>)> {
        let f = self.evaluate_smooth(x, counters)?;
        counters.full_evals += 1;
        let g = self.evaluate_nonsmooth(x)?;
        Ok((f, g))
    }

    /// The m×n Jacobian of the smooth parts. Counts `m` gradient evaluations.
    pub fn jacobian(&self, x: &[T], counters: &mut EvalCounters) -> Result<Matrix<T>> {
        check_len(self.n, x.len())?;
        let mut jac = Matrix::zeros(self.m(), self.n);
        for (i, c) in self.smooth.iter().enumerate() {
            let row = jac.row_mut(i);
            c.gradient_into(x, row);
            if !linalg::all_finite(row) {
                return Err(Error::NonFinite {
                    objective: i,
                    what: "gradient entry",
                });
            }
        }
        counters.grad_evals += self.m() as u64;
        Ok(jac)
    }
}

/// Largest relative discrepancy between the analytic gradients and central
/// differences with step `h_j = 1e-6·(1 + |x_j|)`, over all objectives.
///
/// The discrepancy of row `i` is `‖fd − ∇f_i‖∞ / max(1, ‖∇f_i‖∞)`.
pub fn gradient_check<T: Scalar>(problem: &McoProblem<T>, x: &[T]) -> Result<T> {
    check_len(problem.n(), x.len())?;
    let mut counters = EvalCounters::default();
    let jac = problem.jacobian(x, &mut counters)?;
    let mut worst = T::zero();
    let mut probe = x.to_vec();
    for (i, c) in problem.smooth().iter().enumerate() {
        let row = jac.row(i);
        let mut err = T::zero();
        for j in 0..x.len() {
            let h = T::lit(1e-6) * (T::one() + x[j].abs());
            probe[j] = x[j] + h;
            let up = c.value(&probe);
            probe[j] = x[j] - h;
            let down = c.value(&probe);
            probe[j] = x[j];
            let fd = (up - down) / (h + h);
            err = err.max((fd - row[j]).abs());
        }
        worst = worst.max(err / linalg::norm_inf(row).max(T::one()));
    }
    Ok(worst)
}
