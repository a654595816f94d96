//! Random strongly convex diagonal quadratics
//! `f_i(x) = ½⟨x, A_i x⟩ + ⟨b_i, x⟩`, `g_i = (1/n)‖x‖₁`, on a box.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::{Bounds, McoProblem, SmoothComponent};
use crate::prox::ProxKind;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSpec {
    pub n: usize,
    /// Range of the diagonal entries of each `A_i`.
    pub diag_range: (f64, f64),
    /// Range of the entries of each `b_i`.
    pub b_range: (f64, f64),
    pub seed: u64,
    /// Variable box `[lower, upper]^n`.
    pub lower: f64,
    pub upper: f64,
}

impl QuadraticSpec {
    pub fn new(n: usize, lower: f64, upper: f64, seed: u64) -> Self {
        Self {
            n,
            diag_range: (1.0, 100.0),
            b_range: (-10.0, 10.0),
            seed,
            lower,
            upper,
        }
    }

    fn validate(&self) -> Result<()> {
        let (dl, du) = self.diag_range;
        let (bl, bu) = self.b_range;
        if self.n == 0 || !(dl > 0.0 && dl <= du) || !(bl <= bu) || !(self.lower < self.upper) {
            return Err(Error::InvalidInput(format!(
                "invalid quadratic spec {self:?}"
            )));
        }
        Ok(())
    }

    /// Draws the data: two diagonals, then two linear terms.
    pub fn generate(&self) -> Result<QuadraticData> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut draw = |lo: f64, hi: f64| -> Vec<f64> {
            if lo == hi {
                return vec![lo; self.n];
            }
            let dist = Uniform::new_inclusive(lo, hi);
            (0..self.n).map(|_| dist.sample(&mut rng)).collect()
        };
        let a_diag = vec![
            draw(self.diag_range.0, self.diag_range.1),
            draw(self.diag_range.0, self.diag_range.1),
        ];
        let b = vec![
            draw(self.b_range.0, self.b_range.1),
            draw(self.b_range.0, self.b_range.1),
        ];
        Ok(QuadraticData {
            a_diag,
            b,
            lower: self.lower,
            upper: self.upper,
        })
    }
}

/// Generated coefficients of a quadratic instance.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticData {
    pub a_diag: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub lower: f64,
    pub upper: f64,
}

impl QuadraticData {
    /// Hash of the coefficient bit patterns.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for v in self.a_diag.iter().chain(&self.b) {
            for x in v {
                x.to_bits().hash(&mut h);
            }
        }
        h.finish()
    }

    pub fn into_problem<T: Scalar>(self, name: &str) -> Result<McoProblem<T>> {
        let n = self.a_diag[0].len();
        let smooth = self
            .a_diag
            .iter()
            .zip(&self.b)
            .map(|(a, b)| {
                let l = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mu = a.iter().cloned().fold(f64::INFINITY, f64::min);
                let a: Vec<T> = a.iter().map(|&v| T::lit(v)).collect();
                let b: Vec<T> = b.iter().map(|&v| T::lit(v)).collect();
                let (a2, b2) = (a.clone(), b.clone());
                SmoothComponent::new(
                    move |x: &[T]| {
                        x.iter()
                            .zip(a.iter().zip(&b))
                            .map(|(&xj, (&aj, &bj))| T::lit(0.5) * aj * xj * xj + bj * xj)
                            .sum()
                    },
                    move |x: &[T], g: &mut [T]| {
                        for j in 0..x.len() {
                            g[j] = a2[j] * x[j] + b2[j];
                        }
                    },
                )
                .with_lipschitz(T::lit(l))
                .with_strong_convexity(T::lit(mu))
            })
            .collect();
        let c = T::one() / T::from_usize_lossy(n);
        McoProblem::new(
            name,
            n,
            smooth,
            ProxKind::uniform_l1(2, c)?,
            Some(Bounds::uniform(n, T::lit(self.lower), T::lit(self.upper))?),
        )
    }
}

pub fn make_quadratic<T: Scalar>(spec: &QuadraticSpec) -> Result<McoProblem<T>> {
    let name = format!(
        "quadratic(n={},xl={},xu={},seed={})",
        spec.n, spec.lower, spec.upper, spec.seed
    );
    spec.generate()?.into_problem(&name)
}
