//! Classical bi- and tri-objective test functions, each paired with
//! `g_i = (1/n)‖x‖₁` and a variable box.

use std::f64::consts::PI;

use crate::error::Result;
use crate::problem::{Bounds, McoProblem, SmoothComponent};
use crate::prox::ProxKind;
use crate::Scalar;

fn build<T: Scalar>(
    name: &str,
    n: usize,
    lower: f64,
    upper: f64,
    smooth: Vec<SmoothComponent<T>>,
) -> Result<McoProblem<T>> {
    let m = smooth.len();
    let c = T::one() / T::from_usize_lossy(n);
    McoProblem::new(
        name,
        n,
        smooth,
        ProxKind::uniform_l1(m, c)?,
        Some(Bounds::uniform(n, T::lit(lower), T::lit(upper))?),
    )
}

fn lit<T: Scalar>(v: f64) -> T {
    T::lit(v)
}

/// `f_1 = x₁² + x₂²`, `f_2 = (x₁ − 5)² + (x₂ − 5)²` on `[−5, 10]²`.
pub fn bk1<T: Scalar>() -> Result<McoProblem<T>> {
    let shifted = |c: f64| {
        SmoothComponent::new(
            move |x: &[T]| x.iter().map(|&v| (v - lit(c)) * (v - lit(c))).sum(),
            move |x: &[T], g: &mut [T]| {
                for (gj, &v) in g.iter_mut().zip(x) {
                    *gj = lit::<T>(2.0) * (v - lit(c));
                }
            },
        )
        .with_lipschitz(lit(2.0))
        .with_strong_convexity(lit(2.0))
    };
    build("BK1", 2, -5.0, 10.0, vec![shifted(0.0), shifted(5.0)])
}

/// `f_1 = (1/n)Σx_j²`, `f_2 = (1/n)Σ(x_j − 2)²`.
pub fn jos1<T: Scalar>(name: &str, n: usize, lower: f64, upper: f64) -> Result<McoProblem<T>> {
    let inv_n = 1.0 / n as f64;
    let shifted = |c: f64| {
        SmoothComponent::new(
            move |x: &[T]| {
                lit::<T>(inv_n) * x.iter().map(|&v| (v - lit(c)) * (v - lit(c))).sum::<T>()
            },
            move |x: &[T], g: &mut [T]| {
                for (gj, &v) in g.iter_mut().zip(x) {
                    *gj = lit::<T>(2.0 * inv_n) * (v - lit(c));
                }
            },
        )
        .with_lipschitz(lit(2.0 * inv_n))
        .with_strong_convexity(lit(2.0 * inv_n))
    };
    build(name, n, lower, upper, vec![shifted(0.0), shifted(2.0)])
}

/// `f_1 = Σx_i²`, `f_2 = 3x₁ + 2x₂ − x₃/3 + 0.01(x₄ − x₅)³`, `n = 5`.
pub fn dd1<T: Scalar>() -> Result<McoProblem<T>> {
    let f1 = SmoothComponent::new(
        |x: &[T]| x.iter().map(|&v| v * v).sum(),
        |x: &[T], g: &mut [T]| {
            for (gj, &v) in g.iter_mut().zip(x) {
                *gj = lit::<T>(2.0) * v;
            }
        },
    )
    .with_lipschitz(lit(2.0))
    .with_strong_convexity(lit(2.0));
    let f2 = SmoothComponent::new(
        |x: &[T]| {
            let d = x[3] - x[4];
            lit::<T>(3.0) * x[0] + lit::<T>(2.0) * x[1] - x[2] / lit(3.0)
                + lit::<T>(0.01) * d * d * d
        },
        |x: &[T], g: &mut [T]| {
            let d = x[3] - x[4];
            g[0] = lit(3.0);
            g[1] = lit(2.0);
            g[2] = lit(-1.0 / 3.0);
            g[3] = lit::<T>(0.03) * d * d;
            g[4] = -g[3];
        },
    );
    build("DD1", 5, -20.0, 20.0, vec![f1, f2])
}

/// `f_1 = x₁`, `f_2 = h(x₂)/x₁` with a bimodal `h`, on `[0.1, 1]²`.
pub fn deb<T: Scalar>() -> Result<McoProblem<T>> {
    // h(y) = 2 − exp(−((y−0.2)/0.004)²) − 0.8·exp(−((y−0.6)/0.4)²)
    fn h<T: Scalar>(y: T) -> (T, T) {
        let u = (y - lit(0.2)) / lit(0.004);
        let v = (y - lit(0.6)) / lit(0.4);
        let e1 = (-u * u).exp();
        let e2 = lit::<T>(0.8) * (-v * v).exp();
        let value = lit::<T>(2.0) - e1 - e2;
        let deriv = e1 * lit(2.0) * u / lit(0.004) + e2 * lit(2.0) * v / lit(0.4);
        (value, deriv)
    }
    let f1 = SmoothComponent::new(
        |x: &[T]| x[0],
        |_: &[T], g: &mut [T]| {
            g[0] = T::one();
            g[1] = T::zero();
        },
    )
    .with_lipschitz(T::zero());
    let f2 = SmoothComponent::new(
        |x: &[T]| h(x[1]).0 / x[0],
        |x: &[T], g: &mut [T]| {
            let (hv, hd) = h(x[1]);
            g[0] = -hv / (x[0] * x[0]);
            g[1] = hd / x[0];
        },
    );
    build("Deb", 2, 0.1, 1.0, vec![f1, f2])
}

/// Three objectives:
/// `f_1 = (1/n²)Σ k(x_k − k)⁴`, `f_2 = exp(Σx_k/n) + ‖x‖²`,
/// `f_3 = 1/(n(n+1)) Σ k(n − k + 1)exp(−x_k)`.
pub fn fds<T: Scalar>(n: usize) -> Result<McoProblem<T>> {
    let nf = n as f64;
    let f1 = SmoothComponent::new(
        move |x: &[T]| {
            let s: T = x
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    let kf = (k + 1) as f64;
                    lit::<T>(kf) * (v - lit(kf)).powi(4)
                })
                .sum();
            s / lit(nf * nf)
        },
        move |x: &[T], g: &mut [T]| {
            for (k, (gk, &v)) in g.iter_mut().zip(x).enumerate() {
                let kf = (k + 1) as f64;
                *gk = lit::<T>(4.0 * kf / (nf * nf)) * (v - lit(kf)).powi(3);
            }
        },
    );
    let f2 = SmoothComponent::new(
        move |x: &[T]| {
            let s: T = x.iter().copied().sum();
            (s / lit(nf)).exp() + x.iter().map(|&v| v * v).sum::<T>()
        },
        move |x: &[T], g: &mut [T]| {
            let s: T = x.iter().copied().sum();
            let e = (s / lit(nf)).exp() / lit(nf);
            for (gk, &v) in g.iter_mut().zip(x) {
                *gk = e + lit::<T>(2.0) * v;
            }
        },
    );
    let weight = move |k: usize| {
        let kf = (k + 1) as f64;
        kf * (nf - kf + 1.0) / (nf * (nf + 1.0))
    };
    let f3 = SmoothComponent::new(
        move |x: &[T]| {
            x.iter()
                .enumerate()
                .map(|(k, &v)| lit::<T>(weight(k)) * (-v).exp())
                .sum()
        },
        move |x: &[T], g: &mut [T]| {
            for (k, (gk, &v)) in g.iter_mut().zip(x).enumerate() {
                *gk = -lit::<T>(weight(k)) * (-v).exp();
            }
        },
    );
    build("FDS", n, -2.0, 2.0, vec![f1, f2, f3])
}

/// `f_1 = 1 − exp(−(x₁−1)² − (x₂+1)²)`, `f_2 = 1 − exp(−(x₁+1)² − (x₂−1)²)`.
pub fn ff1<T: Scalar>() -> Result<McoProblem<T>> {
    let bump = |a: f64, b: f64| {
        SmoothComponent::new(
            move |x: &[T]| {
                let (u, v) = (x[0] - lit(a), x[1] - lit(b));
                T::one() - (-u * u - v * v).exp()
            },
            move |x: &[T], g: &mut [T]| {
                let (u, v) = (x[0] - lit(a), x[1] - lit(b));
                let e = (-u * u - v * v).exp();
                g[0] = lit::<T>(2.0) * u * e;
                g[1] = lit::<T>(2.0) * v * e;
            },
        )
    };
    build("FF1", 2, -1.0, 1.0, vec![bump(1.0, -1.0), bump(-1.0, 1.0)])
}

/// `f_1 = cos(a)·b`, `f_2 = sin(a)·b` with
/// `a = (2π/360)(45 + 40 sin(2πx₁) + 25 sin(2πx₂))`, `b = 1 + 0.5 cos(2πx₁)`.
pub fn hil1<T: Scalar>() -> Result<McoProblem<T>> {
    fn parts<T: Scalar>(x: &[T]) -> (T, T, [T; 2], [T; 2]) {
        let tp: T = lit(2.0 * PI);
        let k: T = lit(2.0 * PI / 360.0);
        let a = k
            * (lit::<T>(45.0)
                + lit::<T>(40.0) * (tp * x[0]).sin()
                + lit::<T>(25.0) * (tp * x[1]).sin());
        let b = T::one() + lit::<T>(0.5) * (tp * x[0]).cos();
        let da = [
            k * lit(40.0) * tp * (tp * x[0]).cos(),
            k * lit(25.0) * tp * (tp * x[1]).cos(),
        ];
        let db = [-lit::<T>(0.5) * tp * (tp * x[0]).sin(), T::zero()];
        (a, b, da, db)
    }
    let f1 = SmoothComponent::new(
        |x: &[T]| {
            let (a, b, _, _) = parts(x);
            a.cos() * b
        },
        |x: &[T], g: &mut [T]| {
            let (a, b, da, db) = parts(x);
            for j in 0..2 {
                g[j] = -a.sin() * da[j] * b + a.cos() * db[j];
            }
        },
    );
    let f2 = SmoothComponent::new(
        |x: &[T]| {
            let (a, b, _, _) = parts(x);
            a.sin() * b
        },
        |x: &[T], g: &mut [T]| {
            let (a, b, da, db) = parts(x);
            for j in 0..2 {
                g[j] = a.cos() * da[j] * b + a.sin() * db[j];
            }
        },
    );
    build("Hil1", 2, 0.0, 1.0, vec![f1, f2])
}

/// `f_1 = x₁⁴ + x₂⁴ − x₁² + x₂² − 10x₁x₂ + 0.25x₁ + 20`, `f_2 = (x₁ − 1)² + x₂²`.
pub fn pnr<T: Scalar>() -> Result<McoProblem<T>> {
    let f1 = SmoothComponent::new(
        |x: &[T]| {
            let (a, b) = (x[0], x[1]);
            a.powi(4) + b.powi(4) - a * a + b * b - lit::<T>(10.0) * a * b
                + lit::<T>(0.25) * a
                + lit(20.0)
        },
        |x: &[T], g: &mut [T]| {
            let (a, b) = (x[0], x[1]);
            g[0] = lit::<T>(4.0) * a.powi(3) - lit::<T>(2.0) * a - lit::<T>(10.0) * b + lit(0.25);
            g[1] = lit::<T>(4.0) * b.powi(3) + lit::<T>(2.0) * b - lit::<T>(10.0) * a;
        },
    );
    let f2 = SmoothComponent::new(
        |x: &[T]| (x[0] - T::one()) * (x[0] - T::one()) + x[1] * x[1],
        |x: &[T], g: &mut [T]| {
            g[0] = lit::<T>(2.0) * (x[0] - T::one());
            g[1] = lit::<T>(2.0) * x[1];
        },
    )
    .with_lipschitz(lit(2.0))
    .with_strong_convexity(lit(2.0));
    build("PNR", 2, -2.0, 2.0, vec![f1, f2])
}

/// `f_1 = 1/(x₁² + x₂² + 1)`, `f_2 = x₁² + 3x₂² + 1`.
pub fn vu1<T: Scalar>() -> Result<McoProblem<T>> {
    let f1 = SmoothComponent::new(
        |x: &[T]| T::one() / (x[0] * x[0] + x[1] * x[1] + T::one()),
        |x: &[T], g: &mut [T]| {
            let q = x[0] * x[0] + x[1] * x[1] + T::one();
            let s = -lit::<T>(2.0) / (q * q);
            g[0] = s * x[0];
            g[1] = s * x[1];
        },
    );
    let f2 = SmoothComponent::new(
        |x: &[T]| x[0] * x[0] + lit::<T>(3.0) * x[1] * x[1] + T::one(),
        |x: &[T], g: &mut [T]| {
            g[0] = lit::<T>(2.0) * x[0];
            g[1] = lit::<T>(6.0) * x[1];
        },
    )
    .with_lipschitz(lit(6.0))
    .with_strong_convexity(lit(2.0));
    build("VU1", 2, -3.0, 3.0, vec![f1, f2])
}
