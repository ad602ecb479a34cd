//! Independent checkers and the pivot-count harness.
//!
//! The checkers and the enumeration oracle share no code with the tableau:
//! solutions and certificates are checked directly against `A` and `b`, and
//! ground truth comes from brute-force vertex enumeration with its own
//! Gaussian elimination.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::lp::solve_lp_thresholds;
use crate::model::{corpus, InequalitySystem, LinearProgram, ThresholdSpec};
use crate::scalar::{dot, int, to_decimal_string, Field, Rational};
use crate::solve::{solve, SolveOptions, SolveOutcome};
use crate::tableau::DualTableau;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("enumeration over {vars} variables and {rows} rows exceeds the budget ({max_vars} / {max_rows})")]
    BudgetExceeded {
        vars: usize,
        rows: usize,
        max_vars: usize,
        max_rows: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation<T> {
    /// 0-based row of the system.
    pub row: usize,
    /// `b_i - A_i·x`, always positive.
    pub shortfall: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport<T> {
    pub feasible: bool,
    pub violations: Vec<Violation<T>>,
    /// Indices of negative coordinates of `x`.
    pub negative_vars: Vec<usize>,
}

/// Exact check of `Ax >= b` and `x >= 0`.
pub fn check_solution<T: Field>(
    system: &InequalitySystem<T>,
    x: &[T],
) -> Result<FeasibilityReport<T>, OracleError> {
    if x.len() != system.num_vars() {
        return Err(OracleError::LengthMismatch {
            expected: system.num_vars(),
            found: x.len(),
        });
    }
    let violations: Vec<_> = system
        .a()
        .iter()
        .zip(system.b())
        .enumerate()
        .filter_map(|(row, (a, b))| {
            let shortfall = b.clone() - dot(a, x);
            shortfall
                .is_positive()
                .then_some(Violation { row, shortfall })
        })
        .collect();
    let negative_vars: Vec<_> = x.iter().positions(|v| v.is_negative()).collect();
    Ok(FeasibilityReport {
        feasible: violations.is_empty() && negative_vars.is_empty(),
        violations,
        negative_vars,
    })
}

/// `u >= 0`, `uᵀA <= 0` and `uᵀb > 0`: proof that the system has no
/// non-negative solution.
pub fn check_farkas<T: Field>(system: &InequalitySystem<T>, u: &[T]) -> Result<bool, OracleError> {
    if u.len() != system.num_rows() {
        return Err(OracleError::LengthMismatch {
            expected: system.num_rows(),
            found: u.len(),
        });
    }
    if u.iter().any(|v| v.is_negative()) {
        return Ok(false);
    }
    let combined_positive = (0..system.num_vars()).any(|j| {
        let col = u.iter().zip(system.a()).fold(T::zero(), |acc, (ui, row)| {
            acc + ui.clone() * row[j].clone()
        });
        col.is_positive()
    });
    Ok(!combined_positive && dot(u, system.b()).is_positive())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vars: usize,
    pub max_rows: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_vars: 8,
            max_rows: 10,
        }
    }
}

/// Solves the square system `M z = r`; `None` if `M` is singular.
fn solve_square<T: Field>(mut m: Vec<Vec<T>>, mut r: Vec<T>) -> Option<Vec<T>> {
    let n = r.len();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        r.swap(col, p);
        let inv = T::one() / m[col][col].clone();
        for v in &mut m[col][col..] {
            *v = v.clone() * inv.clone();
        }
        r[col] = r[col].clone() * inv;
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            let pivot_row = m[col].clone();
            for (v, p) in m[i][col..].iter_mut().zip(&pivot_row[col..]) {
                *v = v.clone() - f.clone() * p.clone();
            }
            r[i] = r[i].clone() - f * r[col].clone();
        }
    }
    Some(r)
}

fn within_budget<T: Field>(
    system: &InequalitySystem<T>,
    budget: &OracleBudget,
) -> Result<(), OracleError> {
    if system.num_vars() > budget.max_vars || system.num_rows() > budget.max_rows {
        return Err(OracleError::BudgetExceeded {
            vars: system.num_vars(),
            rows: system.num_rows(),
            max_vars: budget.max_vars,
            max_rows: budget.max_rows,
        });
    }
    Ok(())
}

/// All vertices of `{x >= 0 : Ax >= b}`: every choice of `n` tight
/// constraints among the `m` rows and `n` bounds, solved exactly and kept if
/// feasible. Sorted and deduplicated.
pub fn enumerate_vertices<T: Field>(
    system: &InequalitySystem<T>,
    budget: &OracleBudget,
) -> Result<Vec<Vec<T>>, OracleError> {
    within_budget(system, budget)?;
    let n = system.num_vars();
    let m = system.num_rows();
    let mut found = BTreeSet::new();
    for active in (0..m + n).combinations(n) {
        let mut mat = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for &k in &active {
            if k < m {
                mat.push(system.a()[k].clone());
                rhs.push(system.b()[k].clone());
            } else {
                let mut unit = vec![T::zero(); n];
                unit[k - m] = T::one();
                mat.push(unit);
                rhs.push(T::zero());
            }
        }
        if let Some(x) = solve_square(mat, rhs) {
            if check_solution(system, &x)?.feasible {
                found.insert(x);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// A non-empty `{x >= 0 : Ax >= b}` is pointed, so it is non-empty exactly
/// when it has a vertex.
pub fn oracle_feasible<T: Field>(
    system: &InequalitySystem<T>,
    budget: &OracleBudget,
) -> Result<bool, OracleError> {
    Ok(!enumerate_vertices(system, budget)?.is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult<T> {
    Infeasible,
    Unbounded,
    Optimal { value: T, vertex: Vec<T> },
}

/// Minimum of `c·x` by enumeration. Unboundedness is decided on the
/// recession system, which may use one row beyond the budget.
pub fn oracle_min<T: Field>(
    lp: &LinearProgram<T>,
    budget: &OracleBudget,
) -> Result<OracleResult<T>, OracleError> {
    let vertices = enumerate_vertices(lp.system(), budget)?;
    if vertices.is_empty() {
        return Ok(OracleResult::Infeasible);
    }
    let relaxed = OracleBudget {
        max_rows: budget.max_rows + 1,
        ..*budget
    };
    if oracle_feasible(&lp.recession_system(), &relaxed)? {
        return Ok(OracleResult::Unbounded);
    }
    let (value, vertex) = vertices
        .into_iter()
        .map(|v| (lp.objective_value(&v), v))
        .min()
        .expect("non-empty");
    Ok(OracleResult::Optimal { value, vertex })
}

/// Random `m x n` system with integer entries uniform in `[-9, 9]`.
pub fn random_system(rng: &mut impl Rng, n: usize, m: usize) -> InequalitySystem<Rational> {
    let mut entry = || int(rng.gen_range(-9..=9));
    let a = (0..m).map(|_| (0..n).map(|_| entry()).collect()).collect();
    let b = (0..m).map(|_| entry()).collect();
    InequalitySystem::new(a, b, n).expect("generated with consistent dimensions")
}

/// Batch description for [`pivot_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatsConfig {
    pub vars: usize,
    pub cons: usize,
    pub count: usize,
    pub seed: u64,
    /// Draw each instance's `n` from `1..=vars` and `m` from `0..=cons`
    /// instead of using them as fixed sizes.
    pub vary_dims: bool,
}

impl StatsConfig {
    pub fn instance_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }

    /// The `index`-th instance; each instance has its own seeded generator.
    pub fn instance(&self, index: usize) -> InequalitySystem<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.instance_seed(index));
        let (n, m) = if self.vary_dims {
            (
                rng.gen_range(1..=self.vars.max(1)),
                rng.gen_range(0..=self.cons),
            )
        } else {
            (self.vars.max(1), self.cons)
        };
        random_system(&mut rng, n, m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsRow {
    pub instance: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub verdict: &'static str,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotStatsReport {
    pub rows: Vec<StatsRow>,
    /// Whether any solve switched to the smallest-index rule.
    pub fallback_engaged: bool,
}

impl PivotStatsReport {
    /// Share of instances with at most `m` pivots; `None` for an empty batch.
    pub fn fraction_within_rows(&self) -> Option<Rational> {
        if self.rows.is_empty() {
            return None;
        }
        let hits = self.rows.iter().filter(|r| r.pivots <= r.m).count();
        Some(Rational::new(hits.into(), self.rows.len().into()))
    }

    pub fn limit_exceeded(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict == "limit").count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance,seed,n,m,verdict,pivots\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.instance, r.seed, r.n, r.m, r.verdict, r.pivots
            ));
        }
        if let Some(f) = self.fraction_within_rows() {
            out.push_str(&format!(
                "# fraction_pivots_le_m={}\n",
                to_decimal_string(&f, 4, false)
            ));
        }
        out
    }
}

/// Solves a seeded random batch and tabulates pivot counts. Instances are
/// solved in parallel; rows stay in instance order.
pub fn pivot_stats(config: &StatsConfig) -> PivotStatsReport {
    let results: Vec<(StatsRow, bool)> = (0..config.count)
        .into_par_iter()
        .map(|i| {
            let system = config.instance(i);
            let mut tab = DualTableau::build(&system, None, None).expect("valid system");
            let out = solve(&mut tab, &SolveOptions::default());
            let row = StatsRow {
                instance: i.to_string(),
                seed: config.instance_seed(i),
                n: system.num_vars(),
                m: system.num_rows(),
                verdict: out.verdict(),
                pivots: out.pivots(),
            };
            (row, tab.fallback_engaged())
        })
        .collect();
    PivotStatsReport {
        fallback_engaged: results.iter().any(|(_, f)| *f),
        rows: results.into_iter().map(|(r, _)| r).collect(),
    }
}

/// The worked examples as a fixed batch: the two feasibility systems and the
/// Klee-Minty threshold run at 500, 600, 700 (one row, pivots summed).
pub fn corpus_stats() -> PivotStatsReport {
    let mut rows = Vec::new();
    let mut fallback = false;
    for (name, system) in [
        ("example_3_1", corpus::example_3_1()),
        ("example_3_2_system", corpus::example_3_2_system()),
    ] {
        let mut tab = DualTableau::build(&system, None, None).expect("valid system");
        let out = solve(&mut tab, &SolveOptions::default());
        fallback |= tab.fallback_engaged();
        rows.push(StatsRow {
            instance: name.to_string(),
            seed: 0,
            n: system.num_vars(),
            m: system.num_rows(),
            verdict: out.verdict(),
            pivots: out.pivots(),
        });
    }
    let km = corpus::klee_minty_4();
    let spec = ThresholdSpec::new(vec![int(500), int(600), int(700)]).expect("increasing");
    let run = solve_lp_thresholds(&km, &spec, &SolveOptions::default()).expect("valid program");
    fallback |= run.tableau.fallback_engaged();
    let last = run.steps.last().expect("at least one threshold");
    rows.push(StatsRow {
        instance: "klee_minty_4".to_string(),
        seed: 0,
        n: km.num_vars(),
        m: km.num_rows() + spec.len(),
        verdict: last.outcome.verdict(),
        pivots: run.total_pivots(),
    });
    PivotStatsReport {
        rows,
        fallback_engaged: fallback,
    }
}

/// True when `outcome` is backed by an exact check: a feasible point passes
/// [`check_solution`] on `system`, an infeasible verdict's ray passes
/// [`check_farkas`] on the extended system of `tab`.
pub fn outcome_certified<T: Field>(
    system: &InequalitySystem<T>,
    tab: &DualTableau<T>,
    outcome: &SolveOutcome<T>,
) -> bool {
    match outcome {
        SolveOutcome::Feasible { x, .. } => check_solution(system, x).is_ok_and(|r| r.feasible),
        SolveOutcome::Infeasible { ray, .. } => {
            check_farkas(&tab.extended_system(), &ray.y).unwrap_or(false)
        }
        SolveOutcome::LimitExceeded { .. } => false,
    }
}
