//! Campaign description: which problem, which algorithms, how many starts.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use bbpgmo::problems::{make_named, make_quadratic, QuadraticSpec};
use bbpgmo::{Algorithm, Problem};

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Named(String),
    /// Random diagonal quadratic pair on `[lower, upper]^n`. Without an
    /// explicit seed the instance is drawn from the campaign seed.
    Quadratic {
        n: usize,
        lower: f64,
        upper: f64,
        seed: Option<u64>,
    },
}

impl ProblemSpec {
    pub fn build(&self, campaign_seed: u64) -> Result<Problem> {
        match self {
            Self::Named(key) => Ok(make_named(key)?),
            Self::Quadratic {
                n,
                lower,
                upper,
                seed,
            } => {
                let spec = QuadraticSpec::new(*n, *lower, *upper, seed.unwrap_or(campaign_seed));
                Ok(make_quadratic(&spec)?)
            }
        }
    }
}

/// Splits `a=1,b=2` into pairs.
fn params(text: &str) -> Result<Vec<(&str, &str)>> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| anyhow!("expected key=value, found {p:?}"))
        })
        .collect()
}

impl FromStr for ProblemSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(rest) = s.strip_prefix("quadratic:") else {
            if s == "quadratic" {
                bail!("quadratic needs parameters, e.g. quadratic:n=10,xl=-2,xu=2");
            }
            return Ok(Self::Named(s.to_string()));
        };
        let (mut n, mut lower, mut upper, mut seed) = (None, None, None, None);
        for (k, v) in params(rest)? {
            let bad = || format!("bad value for {k}: {v:?}");
            match k {
                "n" => n = Some(v.parse::<usize>().with_context(bad)?),
                "xl" => lower = Some(v.parse::<f64>().with_context(bad)?),
                "xu" => upper = Some(v.parse::<f64>().with_context(bad)?),
                "seed" => seed = Some(v.parse::<u64>().with_context(bad)?),
                _ => bail!("unknown quadratic parameter {k:?} (expected n, xl, xu, seed)"),
            }
        }
        let n = n.ok_or_else(|| anyhow!("quadratic needs n"))?;
        let lower = lower.ok_or_else(|| anyhow!("quadratic needs xl"))?;
        let upper = upper.ok_or_else(|| anyhow!("quadratic needs xu"))?;
        if n == 0 || !(lower < upper) {
            bail!("quadratic needs n ≥ 1 and xl < xu");
        }
        Ok(Self::Quadratic {
            n,
            lower,
            upper,
            seed,
        })
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Named(k) => write!(f, "{k}"),
            Self::Quadratic {
                n,
                lower,
                upper,
                seed,
            } => {
                write!(f, "quadratic:n={n},xl={lower},xu={upper}")?;
                match seed {
                    Some(s) => write!(f, ",seed={s}"),
                    None => Ok(()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgoKind {
    Bbpgmo,
    Abbpgmo {
        tau: f64,
    },
    /// `ell` defaults to the largest Lipschitz constant of the problem, or 1
    /// when none is known.
    PgmoLs {
        ell: Option<f64>,
    },
    PgmoFixed {
        ell: Option<f64>,
    },
    PgmoL,
    PgmoMu,
}

/// One algorithm column of a campaign, labelled by the text it was parsed from.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoSpec {
    pub label: String,
    pub kind: AlgoKind,
}

impl AlgoSpec {
    pub fn resolve(&self, problem: &Problem) -> Result<Algorithm<f64>> {
        let ell = |given: Option<f64>| -> Result<f64> {
            match given {
                Some(v) => Ok(v),
                None => problem.lipschitz_max().filter(|&l| l > 0.0).ok_or_else(|| {
                    anyhow!(
                        "{}: {} has no Lipschitz constants; pass ell explicitly",
                        self.label,
                        problem.name()
                    )
                }),
            }
        };
        Ok(match self.kind {
            AlgoKind::Bbpgmo => Algorithm::Bbpgmo,
            AlgoKind::Abbpgmo { tau } => Algorithm::AdaptiveBbpgmo { tau },
            // backtracking makes any ell safe, so fall back to 1 without constants
            AlgoKind::PgmoLs { ell: e } => Algorithm::PgmoLineSearch {
                ell: ell(e).or_else(|err| problem.lipschitz_max().map_or(Ok(1.0), |_| Err(err)))?,
            },
            AlgoKind::PgmoFixed { ell: e } => Algorithm::PgmoFixed { ell: ell(e)? },
            AlgoKind::PgmoL => Algorithm::PgmoSeparate,
            AlgoKind::PgmoMu => Algorithm::PgmoStrongConvexity,
        })
    }
}

impl FromStr for AlgoSpec {
    type Err = anyhow::Error;

    /// `name` or `name:key=value,…`, e.g. `abbpgmo:tau=3` or `pgmo_ls:ell=50`.
    fn from_str(s: &str) -> Result<Self> {
        let label = s.trim().to_string();
        let (name, rest) = label.split_once(':').unwrap_or((&label, ""));
        let mut ell = None;
        let mut tau = None;
        for (k, v) in params(rest)? {
            let value: f64 = v
                .parse()
                .with_context(|| format!("bad value for {k}: {v:?}"))?;
            match k {
                "ell" => ell = Some(value),
                "tau" => tau = Some(value),
                _ => bail!("unknown algorithm parameter {k:?}"),
            }
        }
        let takes_ell = matches!(name, "pgmo" | "pgmo_ls" | "pgmo_fixed");
        if ell.is_some() && !takes_ell || tau.is_some() && name != "abbpgmo" {
            bail!("parameter not accepted by {name}");
        }
        let kind = match name {
            "bbpgmo" => AlgoKind::Bbpgmo,
            "abbpgmo" => AlgoKind::Abbpgmo { tau: tau.unwrap_or(2.0) },
            "pgmo" | "pgmo_ls" => AlgoKind::PgmoLs { ell },
            "pgmo_fixed" => AlgoKind::PgmoFixed { ell },
            "pgmo_L" => AlgoKind::PgmoL,
            "pgmo_mu" => AlgoKind::PgmoMu,
            _ => bail!(
                "unknown algorithm {name:?}; known: bbpgmo, abbpgmo, pgmo_ls, pgmo_fixed, pgmo_L, pgmo_mu"
            ),
        };
        Ok(Self { label, kind })
    }
}

pub fn parse_algos(list: &str) -> Result<Vec<AlgoSpec>> {
    // commas also separate parameters, so split on commas not followed by `key=`
    let mut out: Vec<String> = Vec::new();
    for piece in list.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        match out.last_mut() {
            Some(prev) if piece.contains('=') && !piece.contains(':') => {
                prev.push(',');
                prev.push_str(piece);
            }
            _ => out.push(piece.to_string()),
        }
    }
    out.iter().map(|s| s.parse()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: ProblemSpec,
    pub algos: Vec<AlgoSpec>,
    pub trials: usize,
    pub seed: u64,
    pub d_tol: f64,
    pub max_iters: usize,
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
    /// Keep the full solve reports (traces) in the result.
    pub keep_reports: bool,
}

impl ExperimentSpec {
    pub fn new(problem: ProblemSpec, algos: Vec<AlgoSpec>) -> Self {
        Self {
            problem,
            algos,
            trials: 200,
            seed: 0,
            d_tol: 1e-6,
            max_iters: 500,
            jobs: None,
            keep_reports: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if !(self.d_tol > 0.0) || self.max_iters == 0 {
            bail!("d-tol and max-iters must be positive");
        }
        if self.jobs == Some(0) {
            bail!("jobs must be at least 1");
        }
        Ok(())
    }
}
