//! Benchmark campaigns for the `bbpgmo` solvers: shared random starts, CSV and
//! SVG export, and the acceptance checks behind `bench verify`.

pub mod campaign;
pub mod config;
pub mod export;
pub mod spec;
pub mod verify;

pub use campaign::{run_campaign, run_on, ExperimentSummary, RawRow, SummaryRow};
pub use export::{export_results, Exported};
pub use spec::{parse_algos, AlgoSpec, ExperimentSpec, ProblemSpec};
