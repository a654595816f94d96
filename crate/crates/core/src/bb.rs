//! Per-objective Barzilai-Borwein scalars.

use crate::error::{check_len, Error, Result};
use crate::linalg::{self, Matrix};
use crate::Scalar;

/// Safeguard interval for the BB scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BbConfig<T> {
    pub alpha_min: T,
    pub alpha_max: T,
}

impl<T: Scalar> Default for BbConfig<T> {
    fn default() -> Self {
        Self {
            alpha_min: T::lit(1e-3),
            alpha_max: T::lit(1e3),
        }
    }
}

impl<T: Scalar> BbConfig<T> {
    pub fn new(alpha_min: T, alpha_max: T) -> Result<Self> {
        let cfg = Self {
            alpha_min,
            alpha_max,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_min > T::zero() && self.alpha_min <= self.alpha_max {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "BB bounds need 0 < alpha_min ≤ alpha_max, got [{}, {}]",
                self.alpha_min, self.alpha_max
            )))
        }
    }

    fn clamp(&self, v: T) -> T {
        v.min(self.alpha_max).max(self.alpha_min)
    }
}

/// Previous iterate and its Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct BbMemory<T> {
    pub prev_x: Vec<T>,
    pub prev_grads: Matrix<T>,
}

/// `α_i` from `s = x − x_prev` and `y_i = ∇f_i(x) − ∇f_i(x_prev)`:
///
/// * `⟨s, y_i⟩ > 0`: `⟨s, y_i⟩ / ⟨s, s⟩`
/// * `⟨s, y_i⟩ < 0`: `‖y_i‖ / ‖s‖`
/// * `⟨s, y_i⟩ = 0`: `alpha_min`
///
/// clamped into `[alpha_min, alpha_max]`. The zero test is
/// `|⟨s, y_i⟩| ≤ 1e-14·‖s‖·‖y_i‖`.
pub fn compute_alphas<T: Scalar>(
    mem: &BbMemory<T>,
    x: &[T],
    grads: &Matrix<T>,
    cfg: &BbConfig<T>,
) -> Result<Vec<T>> {
    check_len(mem.prev_x.len(), x.len())?;
    check_len(mem.prev_grads.rows(), grads.rows())?;
    check_len(grads.cols(), x.len())?;
    let s = linalg::sub(x, &mem.prev_x);
    let ss = linalg::norm_sq(&s);
    if !(ss > T::zero()) {
        return Err(Error::DegenerateStep);
    }
    let s_norm = ss.sqrt();
    let zero_tol = T::lit(1e-14);
    Ok((0..grads.rows())
        .map(|i| {
            let y = linalg::sub(grads.row(i), mem.prev_grads.row(i));
            let sy = linalg::dot(&s, &y);
            let y_norm = linalg::norm(&y);
            if sy.abs() <= zero_tol * s_norm * y_norm {
                cfg.alpha_min
            } else if sy > T::zero() {
                cfg.clamp(sy / ss)
            } else {
                cfg.clamp(y_norm / s_norm)
            }
        })
        .collect())
}
