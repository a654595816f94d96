//! Benchmark instances addressed by key, and start-point sampling.

mod analytic;
mod markowitz;
mod quadratic;

use rand::Rng;

pub use analytic::{bk1, dd1, deb, fds, ff1, hil1, jos1, pnr, vu1};
pub use markowitz::{make_markowitz, make_markowitz_from, MarkowitzData};
pub use quadratic::{make_quadratic, QuadraticData, QuadraticSpec};

use crate::error::{Error, Result};
use crate::problem::{Bounds, McoProblem};
use crate::Scalar;

/// Where the formulas of a registered problem come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Data and formulas fixed by the benchmark protocol itself.
    Protocol,
    /// Standard formulation taken from the problem's original source.
    ReferenceSourced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegistryEntry {
    pub key: &'static str,
    pub provenance: Provenance,
    /// Used by acceptance checks, as opposed to an optional extension.
    pub acceptance: bool,
}

const fn entry(key: &'static str, provenance: Provenance, acceptance: bool) -> RegistryEntry {
    RegistryEntry {
        key,
        provenance,
        acceptance,
    }
}

pub const REGISTRY: &[RegistryEntry] = &[
    entry("BK1", Provenance::ReferenceSourced, true),
    entry("JOS1a", Provenance::ReferenceSourced, true),
    entry("JOS1b", Provenance::ReferenceSourced, true),
    entry("JOS1c", Provenance::ReferenceSourced, false),
    entry("JOS1d", Provenance::ReferenceSourced, false),
    entry("DD1", Provenance::ReferenceSourced, false),
    entry("Deb", Provenance::ReferenceSourced, false),
    entry("FDS", Provenance::ReferenceSourced, false),
    entry("FF1", Provenance::ReferenceSourced, false),
    entry("Hil1", Provenance::ReferenceSourced, false),
    entry("PNR", Provenance::ReferenceSourced, false),
    entry("VU1", Provenance::ReferenceSourced, false),
    entry("Markowitz", Provenance::Protocol, true),
];

pub fn registry_keys() -> Vec<String> {
    REGISTRY.iter().map(|e| e.key.to_string()).collect()
}

pub fn registry_entry(key: &str) -> Option<&'static RegistryEntry> {
    REGISTRY.iter().find(|e| e.key == key)
}

/// Builds a registered problem by key.
pub fn make_named<T: Scalar>(key: &str) -> Result<McoProblem<T>> {
    match key {
        "BK1" => bk1(),
        "JOS1a" => jos1("JOS1a", 50, -2.0, 2.0),
        "JOS1b" => jos1("JOS1b", 100, -2.0, 2.0),
        "JOS1c" => jos1("JOS1c", 100, -50.0, 50.0),
        "JOS1d" => jos1("JOS1d", 100, -100.0, 100.0),
        "DD1" => dd1(),
        "Deb" => deb(),
        "FDS" => fds(5),
        "FF1" => ff1(),
        "Hil1" => hil1(),
        "PNR" => pnr(),
        "VU1" => vu1(),
        "Markowitz" => make_markowitz(),
        _ => Err(Error::UnknownProblem {
            key: key.to_string(),
            available: registry_keys(),
        }),
    }
}

/// How start points are drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum StartSampling<T> {
    /// Uniform in a box.
    Box(Bounds<T>),
    /// Uniform on the unit simplex in `ℝ^n`.
    Simplex(usize),
}

impl<T: Scalar> StartSampling<T> {
    /// Sampling matching the feasible region of a problem, when it has one.
    pub fn for_problem(problem: &McoProblem<T>) -> Option<Self> {
        if let Some(b) = problem.bounds() {
            return Some(Self::Box(b.clone()));
        }
        match problem.nonsmooth().kind() {
            crate::prox::ProxKind::Simplex => Some(Self::Simplex(problem.n())),
            crate::prox::ProxKind::Box { lower, upper } => {
                Bounds::new(lower.clone(), upper.clone())
                    .ok()
                    .map(Self::Box)
            }
            _ => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        match self {
            Self::Box(b) => b
                .lower
                .iter()
                .zip(&b.upper)
                .map(|(&lo, &hi)| lo + (hi - lo) * T::lit(rng.gen::<f64>()))
                .collect(),
            Self::Simplex(n) => {
                // normalized unit exponentials are Dirichlet(1, …, 1)
                let e: Vec<f64> = (0..*n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
                let s: f64 = e.iter().sum();
                e.iter().map(|&v| T::lit(v / s)).collect()
            }
        }
    }
}
