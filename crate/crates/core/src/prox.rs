//! Closed-form proximal and projection operators.
//!
//! Every nonsmooth term supported by the solvers is one of a few kinds whose
//! weighted sums still have a closed-form prox: zero, a weighted ℓ1 norm, the
//! indicator of a box, and the indicator of the unit simplex.

use crate::error::{check_len, Error, Result};
use crate::Scalar;

/// Componentwise `sign(v_j) · max(|v_j| − kappa, 0)`, the prox of `kappa·‖·‖₁`.
pub fn soft_threshold<T: Scalar>(v: &[T], kappa: T) -> Result<Vec<T>> {
    if !(kappa >= T::zero()) {
        return Err(Error::InvalidInput(format!(
            "soft-threshold level must be nonnegative, got {kappa}"
        )));
    }
    Ok(v.iter().map(|&x| shrink(x, kappa)).collect())
}

#[inline]
fn shrink<T: Scalar>(x: T, kappa: T) -> T {
    if x > kappa {
        x - kappa
    } else if x < -kappa {
        x + kappa
    } else {
        T::zero()
    }
}

fn check_box<T: Scalar>(lower: &[T], upper: &[T]) -> Result<()> {
    check_len(lower.len(), upper.len())?;
    if let Some(j) = (0..lower.len()).find(|&j| !(lower[j] <= upper[j])) {
        return Err(Error::InvalidInput(format!(
            "box bounds unordered at coordinate {j}: {} > {}",
            lower[j], upper[j]
        )));
    }
    Ok(())
}

/// Componentwise clamp of `v` into `[lower, upper]`.
pub fn project_box<T: Scalar>(v: &[T], lower: &[T], upper: &[T]) -> Result<Vec<T>> {
    check_box(lower, upper)?;
    check_len(lower.len(), v.len())?;
    Ok(clamp_box(v, lower, upper))
}

pub(crate) fn clamp_box<T: Scalar>(v: &[T], lower: &[T], upper: &[T]) -> Vec<T> {
    v.iter()
        .zip(lower.iter().zip(upper))
        .map(|(&x, (&lo, &hi))| x.max(lo).min(hi))
        .collect()
}

/// Euclidean projection onto `{x ≥ 0, Σx = 1}` by sorting and thresholding.
pub fn project_simplex<T: Scalar>(v: &[T]) -> Vec<T> {
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let mut u = v.to_vec();
    u.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumsum = T::zero();
    let mut theta = T::zero();
    for (j, &uj) in u.iter().enumerate() {
        cumsum = cumsum + uj;
        let candidate = (cumsum - T::one()) / T::from_usize_lossy(j + 1);
        if uj - candidate > T::zero() {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(T::zero())).collect()
}

/// Kind of the nonsmooth term shared by all objectives.
#[derive(Debug, Clone, PartialEq)]
pub enum ProxKind<T> {
    /// `g_i = 0`
    Zero,
    /// `g_i = c_i ‖x‖₁`, one positive coefficient per objective.
    WeightedL1 { coeffs: Vec<T> },
    /// `g_i` is the indicator of `[lower, upper]` for every `i`.
    Box { lower: Vec<T>, upper: Vec<T> },
    /// `g_i` is the indicator of the unit simplex for every `i`.
    Simplex,
}

impl<T: Scalar> ProxKind<T> {
    pub fn weighted_l1(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.iter().any(|&c| !(c > T::zero()) || !c.is_finite()) {
            return Err(Error::InvalidInput(
                "weighted-l1 coefficients must be positive and finite".into(),
            ));
        }
        Ok(Self::WeightedL1 { coeffs })
    }

    /// The same coefficient for each of `m` objectives.
    pub fn uniform_l1(m: usize, c: T) -> Result<Self> {
        Self::weighted_l1(vec![c; m])
    }

    pub fn box_indicator(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        check_box(&lower, &upper)?;
        Ok(Self::Box { lower, upper })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::WeightedL1 { .. } => "weighted-l1",
            Self::Box { .. } => "box",
            Self::Simplex => "simplex",
        }
    }

    pub fn is_indicator(&self) -> bool {
        matches!(self, Self::Box { .. } | Self::Simplex)
    }
}

/// Prox of `Σ_i w_i g_i` at `v` for the given kind.
///
/// Indicator kinds with all-zero weights return `v` unchanged: the prox of the
/// zero function is the identity.
pub fn combined_prox_dispatch<T: Scalar>(kind: &ProxKind<T>, w: &[T], v: &[T]) -> Result<Vec<T>> {
    if w.iter().any(|&wi| !(wi >= T::zero())) {
        return Err(Error::InvalidInput(
            "prox weights must be nonnegative".into(),
        ));
    }
    let total: T = w.iter().copied().sum();
    match kind {
        ProxKind::Zero => Ok(v.to_vec()),
        ProxKind::WeightedL1 { coeffs } => {
            if coeffs.len() != w.len() {
                return Err(Error::InvalidInput(format!(
                    "weighted-l1 has {} coefficients but {} weights were given",
                    coeffs.len(),
                    w.len()
                )));
            }
            let kappa = w.iter().zip(coeffs).map(|(&wi, &ci)| wi * ci).sum();
            soft_threshold(v, kappa)
        }
        ProxKind::Box { lower, upper } => {
            check_len(lower.len(), v.len())?;
            if total > T::zero() {
                Ok(clamp_box(v, lower, upper))
            } else {
                Ok(v.to_vec())
            }
        }
        ProxKind::Simplex => {
            if total > T::zero() {
                Ok(project_simplex(v))
            } else {
                Ok(v.to_vec())
            }
        }
    }
}
