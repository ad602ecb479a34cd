//! Exact simplex on the dual tableau for linear inequality systems.
//!
//! A system `Ax >= b, x >= 0` is decided by pivoting on the tableau of its
//! dual `max b·y, yA + Is = 0, y, s >= 0`: either the reduced costs turn
//! non-positive and the w-row spells out a solution `x`, or some column has a
//! positive reduced cost and no positive entry, which is an unbounded dual
//! ray and a Farkas certificate of infeasibility. Linear programs are solved
//! through objective thresholds `-c·x >= t` or through the combined
//! primal-dual system.
//!
//! All numerics are generic over [`Field`]; the aliases below fix the scalar
//! to the arbitrary-precision [`Rational`].

pub mod io;
pub mod lp;
pub mod model;
pub mod scalar;
pub mod solve;
pub mod tableau;
pub mod verify;

pub use lp::{
    optimize, solve_lp_thresholds, solve_primal_dual, OptimizeOptions, OptimizeOutcome,
    OptimizeReport, PrimalDualOutcome, ThresholdRun, ThresholdStep,
};
pub use model::{klee_minty, InequalitySystem, LinearProgram, ModelError, Problem, ThresholdSpec};
pub use scalar::{parse_rational, rational, Field, Rational};
pub use solve::{extract_farkas_ray, solve, FarkasRay, PivotRecord, SolveOptions, SolveOutcome};
pub use tableau::{ColumnKind, DualTableau, TableauError, TableauSnapshot};

/// Inequality system over exact rationals.
pub type System = model::InequalitySystem<Rational>;
/// Linear program over exact rationals.
pub type Program = model::LinearProgram<Rational>;
pub type Thresholds = model::ThresholdSpec<Rational>;
pub type Tableau = tableau::DualTableau<Rational>;
pub type Outcome = solve::SolveOutcome<Rational>;
pub type Ray = solve::FarkasRay<Rational>;
