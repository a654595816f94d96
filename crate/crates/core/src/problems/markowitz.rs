//! Mean-variance portfolio selection over eight securities:
//! `f_1(x) = −μᵀx`, `f_2(x) = xᵀΣx`, each `g_i` the indicator of the unit simplex.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::problem::{McoProblem, SmoothComponent};
use crate::prox::ProxKind;
use crate::Scalar;

const MU: [f64; 8] = [
    1.0672, 1.1228, 1.1483, 1.1440, 1.1329, 1.1029, 1.1975, 0.9952,
];

#[rustfmt::skip]
const SIGMA: [[f64; 8]; 8] = [
    [ 0.0005, 0.0004,  0.0007,  0.0005, -0.0007,  0.0006, 0.0001, -0.0015],
    [ 0.0004, 0.0216,  0.0110,  0.0116,  0.0138,  0.0092, 0.0208,  0.0027],
    [ 0.0007, 0.0110,  0.0149,  0.0162,  0.0211,  0.0056, 0.0158, -0.0007],
    [ 0.0005, 0.0116,  0.0162,  0.0181,  0.0252,  0.0059, 0.0164, -0.0015],
    [-0.0007, 0.0138,  0.0211,  0.0252,  0.0430,  0.0070, 0.0159, -0.0019],
    [ 0.0006, 0.0092,  0.0056,  0.0059,  0.0070,  0.0045, 0.0073, -0.0006],
    [ 0.0001, 0.0208,  0.0158,  0.0164,  0.0159,  0.0073, 0.0672,  0.0190],
    [-0.0015, 0.0027, -0.0007, -0.0015, -0.0019, -0.0006, 0.0190,  0.0189],
];

/// Expected returns and covariance of the securities.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkowitzData {
    pub mu: Vec<f64>,
    /// Row-major, symmetric.
    pub sigma: Vec<Vec<f64>>,
    /// Most negative eigenvalue of `Σ` still accepted as rounding error.
    pub psd_tolerance: f64,
}

impl MarkowitzData {
    /// The built-in eight-security estimates.
    ///
    /// The entries are given to four decimals, and the rounded matrix has a
    /// slightly negative eigenvalue (about −2.2e-5). Rounding every entry by at
    /// most 5e-5 moves the eigenvalues by at most `8·5e-5`, which is the
    /// tolerance used here.
    pub fn embedded() -> Self {
        Self {
            mu: MU.to_vec(),
            sigma: SIGMA.iter().map(|r| r.to_vec()).collect(),
            psd_tolerance: 8.0 * 5e-5,
        }
    }

    /// Estimates from a return history: whitespace-separated columns, one per
    /// security, a header row of names, then one row per period. Entries are
    /// gross returns (1 + rate) and must be positive. `μ` is the geometric mean
    /// of each column and `Σ` the sample covariance.
    pub fn from_returns_table(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty returns table".into()))?;
        let k = header.split_whitespace().count();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| {
                        Error::InvalidInput(format!("row {}: bad number {tok:?}", lineno + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != k {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} columns, header has {k}",
                    lineno + 1,
                    row.len()
                )));
            }
            if row.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "row {}: gross returns must be positive",
                    lineno + 1
                )));
            }
            rows.push(row);
        }
        let t = rows.len();
        if t < 2 {
            return Err(Error::InvalidInput("need at least two periods".into()));
        }
        let tf = t as f64;
        let mu = (0..k)
            .map(|j| (rows.iter().map(|r| r[j].ln()).sum::<f64>() / tf).exp())
            .collect();
        let mean: Vec<f64> = (0..k)
            .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / tf)
            .collect();
        let mut sigma = vec![vec![0.0; k]; k];
        for a in 0..k {
            for b in a..k {
                let c = rows
                    .iter()
                    .map(|r| (r[a] - mean[a]) * (r[b] - mean[b]))
                    .sum::<f64>()
                    / (tf - 1.0);
                sigma[a][b] = c;
                sigma[b][a] = c;
            }
        }
        Ok(Self {
            mu,
            sigma,
            psd_tolerance: 1e-10,
        })
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Extreme eigenvalues `(λ_min, λ_max)` of `Σ`.
    pub fn sigma_eigen_range(&self) -> (f64, f64) {
        let n = self.n();
        let m = DMatrix::from_fn(n, n, |i, j| self.sigma[i][j]);
        let eig = SymmetricEigen::new(m).eigenvalues;
        (eig.min(), eig.max())
    }

    fn validate(&self) -> Result<(f64, f64)> {
        let n = self.n();
        if n == 0 || self.sigma.len() != n || self.sigma.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(
                "mu and sigma dimensions disagree".into(),
            ));
        }
        for i in 0..n {
            for j in 0..i {
                if (self.sigma[i][j] - self.sigma[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "sigma not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let (lo, hi) = self.sigma_eigen_range();
        if lo < -self.psd_tolerance {
            return Err(Error::InvalidInput(format!(
                "sigma is not positive semidefinite (smallest eigenvalue {lo})"
            )));
        }
        Ok((lo, hi))
    }
}

pub fn make_markowitz<T: Scalar>() -> Result<McoProblem<T>> {
    make_markowitz_from(&MarkowitzData::embedded())
}

pub fn make_markowitz_from<T: Scalar>(data: &MarkowitzData) -> Result<McoProblem<T>> {
    let (lam_min, lam_max) = data.validate()?;
    let n = data.n();
    let mu: Vec<T> = data.mu.iter().map(|&v| T::lit(v)).collect();
    let mu_g = mu.clone();
    let sigma: Vec<Vec<T>> = data
        .sigma
        .iter()
        .map(|r| r.iter().map(|&v| T::lit(v)).collect())
        .collect();
    let sigma_g = sigma.clone();
    let expected = SmoothComponent::new(
        move |x: &[T]| -x.iter().zip(&mu).map(|(&a, &b)| a * b).sum::<T>(),
        move |_: &[T], g: &mut [T]| {
            for (gj, &m) in g.iter_mut().zip(&mu_g) {
                *gj = -m;
            }
        },
    )
    .with_lipschitz(T::zero());
    let variance = SmoothComponent::new(
        move |x: &[T]| {
            sigma
                .iter()
                .zip(x)
                .map(|(row, &xi)| xi * row.iter().zip(x).map(|(&s, &xj)| s * xj).sum::<T>())
                .sum()
        },
        move |x: &[T], g: &mut [T]| {
            for (gi, row) in g.iter_mut().zip(&sigma_g) {
                *gi = T::lit(2.0) * row.iter().zip(x).map(|(&s, &xj)| s * xj).sum::<T>();
            }
        },
    )
    .with_lipschitz(T::lit(2.0 * lam_max));
    let variance = if lam_min > 0.0 {
        variance.with_strong_convexity(T::lit(2.0 * lam_min))
    } else {
        variance
    };
    McoProblem::new(
        "Markowitz",
        n,
        vec![expected, variance],
        ProxKind::Simplex,
        None,
    )
}
