//! Proximal gradient methods for multiobjective composite optimization
//! `min (f_1 + g_1, …, f_m + g_m)` with smooth `f_i` and convex `g_i`.
//!
//! The solvers pick per-objective weights `α_i` (constant, Lipschitz, strong
//! convexity, or Barzilai-Borwein), compute a descent direction from the dual of
//! the direction subproblem by Frank-Wolfe, and step with an Armijo line search
//! or a unit step. Everything is generic over the scalar type; the aliases at
//! the bottom fix it to `f64` or `f32`.
//!
//! ```
//! use bbpgmo::{problems, solve, Algorithm, SolverConfig};
//!
//! let problem = problems::make_named::<f64>("BK1").unwrap();
//! let report = solve(&problem, &[7.0, -3.0], &SolverConfig::new(Algorithm::Bbpgmo)).unwrap();
//! assert!(report.final_direction.unwrap().d_norm() <= 1e-6);
//! ```

pub mod bb;
pub mod dual;
mod error;
pub mod linalg;
pub mod line_search;
pub mod merit;
pub mod problem;
pub mod problems;
pub mod prox;
mod scalar;
pub mod solver;

pub use bb::{compute_alphas, BbConfig, BbMemory};
pub use dual::{
    frank_wolfe_solve, frank_wolfe_solve_from, omega_gradient, omega_value, recover_direction,
    DirectionResult, DualError, FwConfig, SubproblemInput,
};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use line_search::{armijo_search, max_feasible_step, LineSearchConfig, LineSearchOutcome};
pub use merit::{u0_bruteforce, w_merit, w_merit_detailed, Grid, MeritQuery, MeritValue};
pub use problem::{
    gradient_check, Bounds, EvalCounters, ExtReal, McoProblem, NonsmoothFamily, SmoothComponent,
};
pub use prox::{project_box, project_simplex, soft_threshold, ProxKind};
pub use scalar::Scalar;
pub use solver::{
    certificate_holds, pareto_sweep, solve, Algorithm, IterationRecord, SolveReport, SolverConfig,
    Status,
};

pub type Problem = McoProblem<f64>;
pub type Config = SolverConfig<f64>;
pub type Report = SolveReport<f64>;
pub type Direction = DirectionResult<f64>;

pub type Problem32 = McoProblem<f32>;
pub type Config32 = SolverConfig<f32>;
pub type Report32 = SolveReport<f32>;
pub type Direction32 = DirectionResult<f32>;
