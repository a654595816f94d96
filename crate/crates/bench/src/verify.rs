//! Acceptance and invariant checks over fixed-seed campaigns.
//!
//! Every check produces one [`Check`] with a pass flag and the measured
//! numbers. Seeds, trial counts and tolerances are pinned here so that the
//! suite gives the same verdicts on every run.

use std::time::{Duration, Instant};

use anyhow::Result;
use bbpgmo::dual::{frank_wolfe_solve, omega_gradient, omega_value, FwConfig, SubproblemInput};
use bbpgmo::problems::{make_named, StartSampling};
use bbpgmo::{
    solve, u0_bruteforce, w_merit, Algorithm, Bounds, Config, Grid, LineSearchConfig, Matrix,
    McoProblem, MeritQuery, NonsmoothFamily, Problem, ProxKind, Report, SmoothComponent, Status,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::campaign::{dominated_count, run_on, ExperimentSummary};
use crate::spec::{parse_algos, ExperimentSpec, ProblemSpec};

pub const SEED: u64 = 0;
pub const TRIALS: usize = 200;
pub const MARKOWITZ_TRIALS: usize = 100;
pub const ADAPTIVE_TRIALS: usize = 50;
pub const ADAPTIVE_TAU: f64 = 2.0;

#[derive(Debug, Clone)]
pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Check {
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// A finished campaign and its wall time.
pub struct Timed {
    pub summary: ExperimentSummary,
    pub elapsed: Duration,
}

/// The campaigns shared by several checks.
pub struct Suite {
    pub quadratic2: Timed,
    pub quadratic10: Timed,
    pub markowitz: Timed,
    /// BBPGMO on BK1, JOS1a and JOS1b.
    pub table3: Vec<Timed>,
    /// Adaptive BBPGMO on problems with known Lipschitz constants.
    pub adaptive: Vec<(Problem, Timed)>,
}

fn campaign(problem: &Problem, algos: &str, trials: usize) -> Result<Timed> {
    let mut spec = ExperimentSpec::new(
        ProblemSpec::Named(problem.name().into()),
        parse_algos(algos)?,
    );
    spec.trials = trials;
    spec.seed = SEED;
    spec.keep_reports = true;
    let started = Instant::now();
    let summary = run_on(problem, &spec)?;
    Ok(Timed {
        summary,
        elapsed: started.elapsed(),
    })
}

fn quadratic(n: usize) -> Result<Problem> {
    ProblemSpec::Quadratic {
        n,
        lower: -2.0,
        upper: 2.0,
        seed: None,
    }
    .build(SEED)
}

impl Suite {
    pub fn run() -> Result<Self> {
        let q2 = quadratic(2)?;
        let q10 = quadratic(10)?;
        let mk = make_named("Markowitz")?;
        let table3 = ["BK1", "JOS1a", "JOS1b"]
            .iter()
            .map(|k| campaign(&make_named(k)?, "bbpgmo", TRIALS))
            .collect::<Result<Vec<_>>>()?;
        let adaptive = [
            quadratic(2)?,
            quadratic(10)?,
            make_named("BK1")?,
            make_named("JOS1a")?,
            make_named("JOS1b")?,
        ]
        .into_iter()
        .map(|p| {
            let t = campaign(&p, &format!("abbpgmo:tau={ADAPTIVE_TAU}"), ADAPTIVE_TRIALS)?;
            Ok((p, t))
        })
        .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            quadratic2: campaign(&q2, "bbpgmo,pgmo_L,pgmo_mu", TRIALS)?,
            quadratic10: campaign(&q10, "bbpgmo,pgmo_L,pgmo_mu", TRIALS)?,
            markowitz: campaign(&mk, "bbpgmo,pgmo_ls", MARKOWITZ_TRIALS)?,
            table3,
            adaptive,
        })
    }

    fn all(&self) -> impl Iterator<Item = &ExperimentSummary> {
        [&self.quadratic2, &self.quadratic10, &self.markowitz]
            .into_iter()
            .chain(&self.table3)
            .chain(self.adaptive.iter().map(|(_, t)| t))
            .map(|t| &t.summary)
    }

    fn reports(&self) -> impl Iterator<Item = &Report> {
        self.all()
            .flat_map(|s| s.raw.iter().filter_map(|r| r.report.as_ref()))
    }
}

fn timed(id: &'static str, title: &'static str, f: impl FnOnce() -> (bool, String)) -> Check {
    let started = Instant::now();
    let (passed, detail) = f();
    Check {
        id,
        title,
        passed,
        detail,
        elapsed: started.elapsed(),
    }
}

fn mean_of(s: &ExperimentSummary, algo: &str, feval: bool) -> f64 {
    s.row(algo)
        .map(|r| if feval { r.feval_mean } else { r.iter_mean })
        .unwrap_or(f64::NAN)
}

fn within_factor(value: f64, anchor: f64, factor: f64) -> bool {
    value >= anchor / factor && value <= anchor * factor
}

/// Table 1 analogue: ordering and magnitudes on random quadratics.
pub fn quadratic_campaigns(suite: &Suite) -> Check {
    timed("C1", "quadratic campaigns n=2 and n=10", || {
        let mut ok = true;
        let mut parts = Vec::new();
        // (campaign, BB iter, BB feval, μ iter, μ feval, L iter) from the reference runs
        let anchors = [
            (&suite.quadratic2, 3.12, 3.50, 12.12, 27.68, 7.33),
            (&suite.quadratic10, 18.95, 26.22, 128.68, 738.29, 101.09),
        ];
        for (t, bb_i, bb_f, mu_i, mu_f, l_i) in anchors {
            let s = &t.summary;
            let got = [
                ("bbpgmo iter", mean_of(s, "bbpgmo", false), bb_i),
                ("bbpgmo feval", mean_of(s, "bbpgmo", true), bb_f),
                ("pgmo_mu iter", mean_of(s, "pgmo_mu", false), mu_i),
                ("pgmo_mu feval", mean_of(s, "pgmo_mu", true), mu_f),
                ("pgmo_L iter", mean_of(s, "pgmo_L", false), l_i),
            ];
            let order = got[0].1 < got[4].1 && got[4].1 < got[3].1;
            let half = got[0].1 <= 0.5 * got[4].1;
            let off: Vec<String> = got
                .iter()
                .filter(|(_, v, a)| !within_factor(*v, *a, 2.0))
                .map(|(name, v, a)| format!("{name} {v:.2} vs {a}"))
                .collect();
            let fails: usize = s.rows.iter().map(|r| r.failures).sum();
            ok &= order && half && off.is_empty() && fails == 0;
            parts.push(format!(
                "n={}: bb {:.2}/{:.2}, mu {:.2}/{:.2}, L {:.2}; order {}, halving {}, outside 2x [{}], failures {fails}",
                s.n,
                got[0].1,
                got[1].1,
                got[2].1,
                got[3].1,
                got[4].1,
                order,
                half,
                off.join("; ")
            ));
        }
        let secs = (suite.quadratic2.elapsed + suite.quadratic10.elapsed).as_secs_f64();
        ok &= secs < 30.0;
        parts.push(format!("campaign time {secs:.2} s"));
        (ok, parts.join(" | "))
    })
}

/// Table 4 analogue.
pub fn markowitz_campaign(suite: &Suite) -> Check {
    timed("C2", "Markowitz campaign", || {
        let s = &suite.markowitz.summary;
        let bb = mean_of(s, "bbpgmo", false);
        let pg = mean_of(s, "pgmo_ls", false);
        let secs = suite.markowitz.elapsed.as_secs_f64();
        let ok = (3.0..=20.0).contains(&bb) && pg >= 10.0 * bb && secs < 20.0;
        let fails: Vec<String> = s
            .rows
            .iter()
            .map(|r| format!("{} {}", r.algo, r.failures))
            .collect();
        (
            ok,
            format!(
                "bbpgmo iter {bb:.2} (need [3, 20]), pgmo(ell=L_max) iter {pg:.2} = {:.1}x (need >= 10x), unconverged [{}], {secs:.2} s",
                pg / bb,
                fails.join(", ")
            ),
        )
    })
}

fn diag_quadratic(a: Vec<f64>, b: Vec<f64>) -> SmoothComponent<f64> {
    let l = a.iter().cloned().fold(0.0, f64::max);
    let mu = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let (a2, b2) = (a.clone(), b.clone());
    SmoothComponent::new(
        move |x: &[f64]| {
            x.iter()
                .zip(a.iter().zip(&b))
                .map(|(&x, (&a, &b))| 0.5 * a * x * x + b * x)
                .sum()
        },
        move |x: &[f64], g: &mut [f64]| {
            for j in 0..x.len() {
                g[j] = a2[j] * x[j] + b2[j];
            }
        },
    )
    .with_lipschitz(l)
    .with_strong_convexity(mu)
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize, l1: bool) -> Problem {
    let mut draw =
        |lo: f64, hi: f64| -> Vec<f64> { (0..n).map(|_| rng.gen_range(lo..=hi)).collect() };
    let comps = (0..2)
        .map(|_| diag_quadratic(draw(1.0, 100.0), draw(-10.0, 10.0)))
        .collect();
    let kind = if l1 {
        ProxKind::uniform_l1(2, 1.0 / n as f64).expect("valid l1")
    } else {
        ProxKind::Zero
    };
    McoProblem::new("pair", n, comps, kind, None).expect("valid pair")
}

/// Per-iteration linear contraction toward the limit with `α_i = L_i` and unit steps.
pub fn linear_contraction() -> Check {
    timed("C3", "linear contraction with per-objective L_i", || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
        let mut violations = 0;
        let mut steps = 0;
        let mut worst: f64 = 0.0;
        let started = Instant::now();
        for _ in 0..20 {
            let n = rng.gen_range(2..=10);
            for l1 in [false, true] {
                let p = random_pair(&mut rng, n, l1);
                let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
                let cfg = Config::new(Algorithm::PgmoSeparate)
                    .with_d_tol(1e-12)
                    .with_max_iters(100_000)
                    .recording_iterates();
                let r = solve(&p, &x0, &cfg).expect("valid configuration");
                if r.status != Status::CriticalPoint {
                    violations += 1;
                    continue;
                }
                let ratio = p
                    .smooth()
                    .iter()
                    .map(|c| c.strong_convexity().unwrap() / c.lipschitz().unwrap())
                    .fold(f64::INFINITY, f64::min);
                let q = (1.0 - ratio).sqrt();
                let star = &r.final_x;
                let dist = |x: &[f64]| {
                    x.iter()
                        .zip(star)
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        .sqrt()
                };
                let mut prev = dist(&x0);
                for rec in &r.trace {
                    let cur = dist(rec.x.as_ref().expect("iterates recorded"));
                    steps += 1;
                    if cur > q * prev + 1e-10 {
                        violations += 1;
                    }
                    if prev > 1e-8 {
                        worst = worst.max(cur / prev / q);
                    }
                    prev = cur;
                }
            }
        }
        let secs = started.elapsed().as_secs_f64();
        (
            violations == 0 && secs < 10.0,
            format!(
                "{violations} violations over {steps} steps on 40 problems, worst ratio/bound {worst:.4}, {secs:.2} s"
            ),
        )
    })
}

/// `model_decrease_i ≤ −α_i‖d‖² + 1e-8` on every accepted direction.
pub fn descent_certificate(suite: &Suite) -> Check {
    timed("C4", "descent certificate on accepted directions", || {
        let mut count = 0;
        let mut bad = 0;
        for r in suite.reports() {
            for rec in &r.trace {
                count += 1;
                let dd = rec.d_norm * rec.d_norm;
                if rec
                    .model_decrease
                    .iter()
                    .zip(&rec.alphas)
                    .any(|(&md, &a)| md > -a * dd + 1e-8)
                {
                    bad += 1;
                }
            }
        }
        (
            bad == 0,
            format!("{bad} violations in {count} accepted directions"),
        )
    })
}

/// `t ≥ min{1, min_i 2γ(1−σ)α_i/L_i}` for Armijo steps on quadratics.
pub fn stepsize_floor(suite: &Suite) -> Check {
    timed("C5", "Armijo stepsize floor on quadratics", || {
        let ls = LineSearchConfig::<f64>::default();
        let mut count = 0;
        let mut bad = 0;
        for t in [&suite.quadratic2, &suite.quadratic10] {
            let p = quadratic(t.summary.n).expect("same instance");
            let l = p.lipschitz_constants().expect("quadratics know L");
            for row in t.summary.raw.iter().filter(|r| r.algo != "pgmo_L") {
                for rec in &row.report.as_ref().expect("reports kept").trace {
                    let floor = rec
                        .alphas
                        .iter()
                        .zip(&l)
                        .map(|(&a, &li)| 2.0 * ls.gamma * (1.0 - ls.sigma) * a / li)
                        .fold(1.0, f64::min);
                    count += 1;
                    if rec.t < floor - 1e-12 {
                        bad += 1;
                    }
                }
            }
        }
        (
            bad == 0,
            format!("{bad} violations in {count} Armijo steps"),
        )
    })
}

fn dirichlet(rng: &mut ChaCha8Rng, m: usize, floor: f64) -> Vec<f64> {
    let e: Vec<f64> = (0..m)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln() + floor)
        .collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| v / s).collect()
}

struct DualInstance {
    x: Vec<f64>,
    grads: Matrix<f64>,
    g_at_x: Vec<f64>,
    alphas: Vec<f64>,
    family: NonsmoothFamily<f64>,
}

impl DualInstance {
    fn random(rng: &mut ChaCha8Rng, n: usize) -> Self {
        let m = rng.gen_range(2..=4);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect();
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect())
            .collect();
        let alphas: Vec<f64> = (0..m)
            .map(|_| 10f64.powf(rng.gen_range(-1.0..=1.0)))
            .collect();
        let l1 = rng.gen_bool(0.5);
        let kind = if l1 {
            ProxKind::weighted_l1((0..m).map(|_| rng.gen_range(0.0..=1.0)).collect())
                .expect("valid")
        } else {
            ProxKind::Zero
        };
        let family = NonsmoothFamily::new(kind, m, None).expect("valid family");
        let g_at_x = (0..m)
            .map(|i| family.value(i, &x).finite().expect("finite"))
            .collect();
        Self {
            x,
            grads: Matrix::from_rows(&rows),
            g_at_x,
            alphas,
            family,
        }
    }

    fn input(&self) -> SubproblemInput<'_, f64> {
        SubproblemInput {
            x: &self.x,
            grads: &self.grads,
            g_at_x: &self.g_at_x,
            alphas: &self.alphas,
            family: &self.family,
        }
    }

    /// `max_i (⟨∇f_i, y−x⟩ + g_i(y) − g_i(x))/α_i + ½‖y−x‖²`
    fn primal(&self, y: &[f64]) -> f64 {
        let s: Vec<f64> = y.iter().zip(&self.x).map(|(a, b)| a - b).collect();
        let lin = self.grads.mul_vec(&s);
        let worst = (0..self.alphas.len())
            .map(|i| {
                let gy = self.family.value(i, y).finite().expect("finite");
                (lin[i] + gy - self.g_at_x[i]) / self.alphas[i]
            })
            .fold(f64::NEG_INFINITY, f64::max);
        worst + 0.5 * s.iter().map(|v| v * v).sum::<f64>()
    }
}

/// Zooming grid search for the 2-D primal minimum (the objective is convex).
fn grid_minimum(inst: &DualInstance) -> f64 {
    let scale = (0..inst.alphas.len())
        .map(|i| inst.grads.row(i).iter().map(|v| v.abs()).sum::<f64>() + 2.0)
        .fold(0.0, f64::max);
    let mut radius = 2.0 * scale / inst.alphas.iter().cloned().fold(f64::INFINITY, f64::min) + 1.0;
    let mut center = inst.x.clone();
    let mut best = inst.primal(&center);
    const K: i32 = 50;
    for _ in 0..40 {
        let h = radius / K as f64;
        let mut arg = center.clone();
        for a in -K..=K {
            for b in -K..=K {
                let y = [center[0] + a as f64 * h, center[1] + b as f64 * h];
                let v = inst.primal(&y);
                if v < best {
                    best = v;
                    arg = y.to_vec();
                }
            }
        }
        center = arg;
        radius = 20.0 * h;
    }
    best
}

/// Gradient of the dual by differences, primal-dual agreement and a 2-D oracle.
pub fn dual_correctness() -> Check {
    timed("C6", "dual gradient, value and grid oracle", || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
        let fw = FwConfig::default();
        let h = 1e-6;
        let mut worst_fd: f64 = 0.0;
        let mut worst_gap_ratio: f64 = 0.0;
        let mut worst_grid: f64 = 0.0;
        let mut evals_ok = true;
        for k in 0..20 {
            let n = if k < 10 { 2 } else { rng.gen_range(3..=8) };
            let inst = DualInstance::random(&mut rng, n);
            let inp = inst.input();
            let m = inst.alphas.len();
            for _ in 0..100 {
                // interior weights with room for the difference step
                let lam = dirichlet(&mut rng, m, 0.05);
                let Ok(g) = omega_gradient(&inp, &lam) else {
                    evals_ok = false;
                    continue;
                };
                for i in 0..m {
                    for j in (i + 1)..m {
                        let mut up = lam.clone();
                        let mut dn = lam.clone();
                        up[i] += h;
                        up[j] -= h;
                        dn[i] -= h;
                        dn[j] += h;
                        let (Ok(fu), Ok(fd)) = (omega_value(&inp, &up), omega_value(&inp, &dn))
                        else {
                            evals_ok = false;
                            continue;
                        };
                        let numeric = (fu - fd) / (2.0 * h);
                        let exact = g[i] - g[j];
                        worst_fd = worst_fd.max((numeric - exact).abs() / exact.abs().max(1.0));
                    }
                }
            }
            match frank_wolfe_solve(&inp, &fw) {
                Ok(r) => {
                    let omega = omega_value(&inp, &r.lambda).unwrap_or(f64::NAN);
                    let primal = r.primal_value(&inst.alphas);
                    let tol = (10.0 * r.fw_gap).max(1e-8);
                    worst_gap_ratio = worst_gap_ratio.max((primal + omega).abs() / tol);
                    if n == 2 {
                        let g = grid_minimum(&inst);
                        worst_grid = worst_grid.max((g - primal).abs());
                    }
                }
                Err(_) => evals_ok = false,
            }
        }
        let ok = evals_ok && worst_fd <= 1e-5 && worst_gap_ratio <= 1.0 && worst_grid <= 1e-5;
        (
            ok,
            format!(
                "max FD rel. error {worst_fd:.2e} (<= 1e-5), max |primal + omega| / tol {worst_gap_ratio:.2e} (<= 1), max grid-oracle error {worst_grid:.2e} (<= 1e-5)"
            ),
        )
    })
}

/// Active objectives decrease equally after scaling by `α_i`.
pub fn scaled_equal_descent(suite: &Suite) -> Check {
    timed("C7", "scaled equal descent on active objectives", || {
        let mut count = 0;
        let mut bad = 0;
        let mut worst: f64 = 0.0;
        for r in suite.reports() {
            for rec in &r.trace {
                let active: Vec<f64> = rec
                    .lambda
                    .iter()
                    .zip(rec.model_decrease.iter().zip(&rec.alphas))
                    .filter(|(&l, _)| l >= 1e-6)
                    .map(|(_, (&md, &a))| md / a)
                    .collect();
                if active.len() < 2 {
                    continue;
                }
                count += 1;
                let lo = active.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = active.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let tol = (10.0 * rec.fw_gap).max(1e-6);
                worst = worst.max((hi - lo) / tol);
                if hi - lo > tol {
                    bad += 1;
                }
            }
        }
        (
            bad == 0,
            format!("{bad} violations in {count} directions with >= 2 active weights, worst spread/tol {worst:.2e}"),
        )
    })
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

fn merit_problems() -> Result<Vec<Problem>> {
    Ok(vec![
        make_named("BK1")?,
        make_named("JOS1a")?,
        make_named("Markowitz")?,
        quadratic(2)?,
        quadratic(10)?,
    ])
}

fn merit_tol(w: f64) -> f64 {
    1e-8 * w.abs().max(1.0)
}

/// Zero exactly at critical points, and the two comparison inequalities.
pub fn merit_properties() -> Check {
    timed("C8", "merit function properties", || {
        let problems = match merit_problems() {
            Ok(p) => p,
            Err(e) => return (false, e.to_string()),
        };
        let fw = FwConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
        let (mut p1, mut p2, mut p3, mut errors) = (0, 0, 0, 0);
        for p in &problems {
            let m = p.m();
            let sampling = StartSampling::for_problem(p).expect("bounded region");
            let w = |x: &[f64], alpha: &[f64], ell: f64| -> Option<f64> {
                MeritQuery::new(x.to_vec(), alpha.to_vec(), ell)
                    .and_then(|q| w_merit(p, &q, &fw))
                    .ok()
            };
            let unit = vec![1.0; m];
            let crit_cfg = Config::new(Algorithm::Bbpgmo)
                .with_d_tol(1e-10)
                .with_max_iters(5000);
            let mut critical = Vec::new();
            let mut noncritical = Vec::new();
            while critical.len() < 10 || noncritical.len() < 100 {
                let x = sampling.sample(&mut rng);
                if critical.len() < 10 {
                    if let Ok(r) = solve(p, &x, &crit_cfg) {
                        if matches!(r.status, Status::CriticalPoint | Status::PrecisionLimit) {
                            critical.push(r.final_x);
                        }
                    }
                }
                // a start counts as noncritical when its unit-weight direction is clearly nonzero
                if noncritical.len() < 100 && w(&x, &unit, 1.0).is_some_and(|v| v > 1e-4) {
                    noncritical.push(x);
                }
            }
            for k in 0..200 {
                let alpha: Vec<f64> = (0..m).map(|_| log_uniform(&mut rng, 0.1, 10.0)).collect();
                let ell = log_uniform(&mut rng, 0.1, 10.0);
                let x = if k % 2 == 0 {
                    &critical[k / 2 % critical.len()]
                } else {
                    &noncritical[k / 2]
                };
                match w(x, &alpha, ell) {
                    Some(v) if (k % 2 == 0) == (v <= 1e-8) => {}
                    Some(_) => p1 += 1,
                    None => errors += 1,
                }

                let x = &noncritical[k % noncritical.len()];
                let r = ell * log_uniform(&mut rng, 1.0, 10.0);
                match (w(x, &alpha, r), w(x, &alpha, ell)) {
                    (Some(wr), Some(wl)) => {
                        if wr > wl + merit_tol(wl) || wl > r / ell * wr + merit_tol(wl) {
                            p2 += 1;
                        }
                    }
                    _ => errors += 1,
                }

                let alpha2: Vec<f64> = alpha
                    .iter()
                    .map(|&a| a * rng.gen_range(0.1..=1.0))
                    .collect();
                let rmax = alpha
                    .iter()
                    .zip(&alpha2)
                    .map(|(a, b)| a / b)
                    .fold(1.0, f64::max);
                match (w(x, &alpha, ell), w(x, &alpha2, ell)) {
                    (Some(w1), Some(w2)) => {
                        if w1 > w2 + merit_tol(w2) || w2 > rmax * rmax * w1 + merit_tol(w2) {
                            p3 += 1;
                        }
                    }
                    _ => errors += 1,
                }
            }
        }
        (
            p1 + p2 + p3 + errors == 0,
            format!(
                "violations: zero-iff-critical {p1}, scaling in ell {p2}, ordering in alpha {p3}; evaluation errors {errors}; 200 samples x 5 problems each"
            ),
        )
    })
}

/// Adaptive weights stay below `τL_i` and need few inflations.
pub fn adaptive_bound(suite: &Suite) -> Check {
    timed("C9", "adaptive weights bounded by tau L_i", || {
        let alpha_min = bbpgmo::BbConfig::<f64>::default().alpha_min;
        let mut count = 0;
        let mut over = 0;
        let mut too_many = 0;
        let mut most = 0;
        for (p, t) in &suite.adaptive {
            let l = p.lipschitz_constants().expect("known L");
            let cap: Vec<usize> = l
                .iter()
                .map(|&li| ((li / alpha_min).ln() / ADAPTIVE_TAU.ln()).ceil().max(0.0) as usize + 1)
                .collect();
            for r in t.summary.raw.iter().filter_map(|r| r.report.as_ref()) {
                for rec in &r.trace {
                    count += 1;
                    if rec
                        .alphas
                        .iter()
                        .zip(&l)
                        .any(|(&a, &li)| a >= ADAPTIVE_TAU * li)
                    {
                        over += 1;
                    }
                    if rec.inflations.iter().zip(&cap).any(|(&k, &c)| k > c) {
                        too_many += 1;
                    }
                    most = most.max(rec.inflations.iter().copied().max().unwrap_or(0));
                }
            }
        }
        let unconverged: usize = suite
            .adaptive
            .iter()
            .map(|(_, t)| t.summary.rows[0].failures)
            .sum();
        (
            over == 0 && too_many == 0 && unconverged == 0,
            format!(
                "{over} weights >= tau L_i, {too_many} iterations over the inflation cap, most inflations {most}, {count} iterations, unconverged runs {unconverged}"
            ),
        )
    })
}

/// Mean accepted BBPGMO stepsize per problem.
pub fn stepsize_range(suite: &Suite) -> Check {
    timed("C10", "BBPGMO mean stepsize in [0.6, 1]", || {
        let runs = [&suite.quadratic2, &suite.quadratic10, &suite.markowitz]
            .into_iter()
            .chain(&suite.table3);
        let mut ok = true;
        let mut parts = Vec::new();
        for t in runs {
            let v = t
                .summary
                .row("bbpgmo")
                .map(|r| r.stepsize_mean)
                .unwrap_or(f64::NAN);
            ok &= (0.6..=1.0).contains(&v);
            parts.push(format!("{} {v:.3}", t.summary.problem));
        }
        (ok, parts.join(", "))
    })
}

/// `u_0` on a fixed grid never increases along BBPGMO iterates (n = 2, convex).
pub fn u0_decay() -> Check {
    timed("U0", "grid u_0 nonincreasing along iterates", || {
        let problems = match (make_named("BK1"), quadratic(2)) {
            (Ok(a), Ok(b)) => vec![a, b],
            _ => return (false, "problem construction failed".into()),
        };
        let mut bad = 0;
        let mut count = 0;
        for p in &problems {
            let b = StartSampling::for_problem(p)
                .and_then(|s| match s {
                    StartSampling::Box(b) => Some(b),
                    StartSampling::Simplex(_) => None,
                })
                .unwrap_or_else(|| Bounds::uniform(2, -5.0, 5.0).expect("valid"));
            let grid = Grid::uniform(b, 201);
            let cfg = Config::new(Algorithm::Bbpgmo).recording_iterates();
            for x0 in crate::campaign::draw_starts(p, 10, SEED + 10).unwrap_or_default() {
                let Ok(r) = solve(p, &x0, &cfg) else {
                    bad += 1;
                    continue;
                };
                let alpha = vec![1.0; p.m()];
                let mut prev = u0_bruteforce(p, &x0, &alpha, &grid).ok();
                for rec in &r.trace {
                    let cur =
                        u0_bruteforce(p, rec.x.as_ref().expect("recorded"), &alpha, &grid).ok();
                    count += 1;
                    match (prev, cur) {
                        (Some(a), Some(c)) if c <= a + 1e-12 => {}
                        _ => bad += 1,
                    }
                    prev = cur;
                }
            }
        }
        (bad == 0, format!("{bad} increases in {count} steps"))
    })
}

/// Converged final points of one algorithm do not dominate each other.
pub fn mutual_nondomination(suite: &Suite) -> Check {
    timed("P1", "converged final points mutually nondominated", || {
        let mut bad = Vec::new();
        let mut total = 0;
        for s in suite.all() {
            for row in &s.rows {
                let pts: Vec<Vec<f64>> = s
                    .raw
                    .iter()
                    .filter(|r| r.algo == row.algo && r.converged())
                    .map(|r| r.final_f.clone())
                    .collect();
                total += pts.len();
                let k = dominated_count(&pts, 1e-6);
                if k > 0 {
                    bad.push(format!("{} {} {k}", s.problem, row.algo));
                }
            }
        }
        (
            bad.is_empty(),
            format!("{total} points checked; dominated: [{}]", bad.join(", ")),
        )
    })
}

/// Runs every check, building the shared campaigns once.
pub fn run_all() -> Result<Vec<Check>> {
    let suite = Suite::run()?;
    Ok(vec![
        quadratic_campaigns(&suite),
        markowitz_campaign(&suite),
        linear_contraction(),
        descent_certificate(&suite),
        stepsize_floor(&suite),
        dual_correctness(),
        scaled_equal_descent(&suite),
        merit_properties(),
        adaptive_bound(&suite),
        stepsize_range(&suite),
        u0_decay(),
        mutual_nondomination(&suite),
    ])
}
