//! Runs every algorithm from the same start points and aggregates the results.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use anyhow::{anyhow, Result};
use bbpgmo::problems::StartSampling;
use bbpgmo::{solve, Config, Problem, Report, Status};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::spec::ExperimentSpec;

/// One solve of one algorithm from one start.
#[derive(Debug, Clone)]
pub struct RawRow {
    pub trial: usize,
    pub algo: String,
    pub x0_hash: String,
    pub status: Status,
    pub iters: usize,
    pub feval: usize,
    pub time_ms: f64,
    /// `None` when no step was taken.
    pub stepsize_mean: Option<f64>,
    pub dual_warnings: usize,
    pub final_f: Vec<f64>,
    pub final_x: Vec<f64>,
    pub report: Option<Report>,
}

impl RawRow {
    pub fn converged(&self) -> bool {
        matches!(self.status, Status::CriticalPoint | Status::PrecisionLimit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algo: String,
    pub iter_mean: f64,
    pub feval_mean: f64,
    pub time_ms_mean: f64,
    pub stepsize_mean: f64,
    /// Runs that did not reach a critical point: hard failures, which are left
    /// out of the means, plus iteration-limit runs, which enter at `max_iters`.
    pub failures: usize,
    pub hard_failures: usize,
}

#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub problem: String,
    pub n: usize,
    pub m: usize,
    pub starts: Vec<Vec<f64>>,
    pub rows: Vec<SummaryRow>,
    /// Sorted by `(trial, algorithm position)`.
    pub raw: Vec<RawRow>,
}

impl ExperimentSummary {
    pub fn row(&self, algo: &str) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.algo == algo)
    }

    pub fn hard_failures(&self) -> usize {
        self.rows.iter().map(|r| r.hard_failures).sum()
    }
}

pub fn point_hash(x: &[f64]) -> String {
    let mut h = DefaultHasher::new();
    for v in x {
        v.to_bits().hash(&mut h);
    }
    format!("{:016x}", h.finish())
}

/// Draws `trials` start points from the problem's natural region.
pub fn draw_starts(problem: &Problem, trials: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let sampling = StartSampling::for_problem(problem).ok_or_else(|| {
        anyhow!(
            "{} has no bounded region to sample starts from",
            problem.name()
        )
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..trials).map(|_| sampling.sample(&mut rng)).collect())
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

fn summarize(algo: &str, raw: &[RawRow]) -> SummaryRow {
    let runs: Vec<&RawRow> = raw.iter().filter(|r| r.algo == algo).collect();
    let kept: Vec<&&RawRow> = runs.iter().filter(|r| !r.status.is_failure()).collect();
    SummaryRow {
        algo: algo.to_string(),
        iter_mean: mean(kept.iter().map(|r| r.iters as f64)),
        feval_mean: mean(kept.iter().map(|r| r.feval as f64)),
        time_ms_mean: mean(kept.iter().map(|r| r.time_ms)),
        stepsize_mean: mean(kept.iter().filter_map(|r| r.stepsize_mean)),
        failures: runs.iter().filter(|r| !r.converged()).count(),
        hard_failures: runs.len() - kept.len(),
    }
}

/// Runs the campaign on an already built problem.
pub fn run_on(problem: &Problem, spec: &ExperimentSpec) -> Result<ExperimentSummary> {
    spec.validate()?;
    let starts = draw_starts(problem, spec.trials, spec.seed)?;
    let configs = spec
        .algos
        .iter()
        .map(|a| {
            let cfg = Config::new(a.resolve(problem)?)
                .with_d_tol(spec.d_tol)
                .with_max_iters(spec.max_iters);
            cfg.validate(problem)
                .map_err(|e| anyhow!("{}: {e}", a.label))?;
            Ok(cfg)
        })
        .collect::<Result<Vec<_>>>()?;

    let tasks: Vec<(usize, usize)> = (0..spec.trials)
        .flat_map(|t| (0..configs.len()).map(move |a| (t, a)))
        .collect();
    let work = || {
        tasks
            .par_iter()
            .map(|&(trial, a)| {
                let x0 = &starts[trial];
                let report = solve(problem, x0, &configs[a])?;
                Ok((
                    a,
                    RawRow {
                        trial,
                        algo: spec.algos[a].label.clone(),
                        x0_hash: point_hash(x0),
                        status: report.status,
                        iters: report.iters,
                        feval: report.feval(),
                        time_ms: report.total_time.as_secs_f64() * 1e3,
                        stepsize_mean: report.mean_stepsize(),
                        dual_warnings: report.dual_warnings,
                        final_f: report.final_f.clone(),
                        final_x: report.final_x.clone(),
                        report: spec.keep_reports.then_some(report),
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()
    };
    let mut results = match spec.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()?
            .install(work)?,
        None => work()?,
    };
    results.sort_by_key(|(a, r)| (r.trial, *a));
    let raw: Vec<RawRow> = results.into_iter().map(|(_, r)| r).collect();
    let rows = spec
        .algos
        .iter()
        .map(|a| summarize(&a.label, &raw))
        .collect();

    Ok(ExperimentSummary {
        problem: problem.name().to_string(),
        n: problem.n(),
        m: problem.m(),
        starts,
        rows,
        raw,
    })
}

pub fn run_campaign(spec: &ExperimentSpec) -> Result<ExperimentSummary> {
    let problem = spec.problem.build(spec.seed)?;
    run_on(&problem, spec)
}

/// Number of final points componentwise dominated by another beyond `tol`,
/// i.e. some other point is better by more than `tol` in every objective.
pub fn dominated_count(points: &[Vec<f64>], tol: f64) -> usize {
    points
        .iter()
        .filter(|a| {
            points
                .iter()
                .any(|b| a.iter().zip(b.iter()).all(|(&ai, &bi)| bi < ai - tol))
        })
        .count()
}
