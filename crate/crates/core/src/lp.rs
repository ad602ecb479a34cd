//! Linear programs on top of the feasibility solver.
//!
//! Three routes: a batch of objective thresholds sharing one tableau, a
//! warm-restarted threshold search with a single column, and the combined
//! primal-dual system whose solutions are optimal pairs.

use crate::model::{LinearProgram, ThresholdSpec};
use crate::scalar::{dot, Field};
use crate::solve::{solve, SolveOptions, SolveOutcome};
use crate::tableau::{DualTableau, TableauError, TableauSnapshot};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdStep<T> {
    pub t: T,
    pub outcome: SolveOutcome<T>,
}

#[derive(Debug, Clone)]
pub struct ThresholdRun<T> {
    /// Tableau before the first pivot.
    pub initial: TableauSnapshot<T>,
    /// One entry per processed threshold, ascending; stops at the first
    /// contradictory one.
    pub steps: Vec<ThresholdStep<T>>,
    /// Final tableau, all threshold columns included.
    pub tableau: DualTableau<T>,
}

impl<T: Field> ThresholdRun<T> {
    pub fn total_pivots(&self) -> usize {
        self.tableau.pivot_count()
    }
}

/// Solves `-c·x >= t` for every `t` in `spec` on one tableau, smallest first.
///
/// Each step activates the next threshold column and continues from the
/// previous basis. A contradictory bound ends the run since every larger
/// bound is contradictory too.
pub fn solve_lp_thresholds<T: Field>(
    lp: &LinearProgram<T>,
    spec: &ThresholdSpec<T>,
    opts: &SolveOptions,
) -> Result<ThresholdRun<T>, TableauError> {
    let mut tab = DualTableau::build(lp.system(), Some(lp.c()), Some(spec))?;
    let initial = tab.snapshot();
    let k = spec.len();
    let mut steps = Vec::with_capacity(k);
    // columns are ordered by descending t
    for (i, t) in spec.values().iter().enumerate() {
        tab.set_active_threshold(k - 1 - i)?;
        let outcome = solve(&mut tab, opts);
        let stop = !outcome.is_feasible();
        steps.push(ThresholdStep {
            t: t.clone(),
            outcome,
        });
        if stop {
            break;
        }
    }
    Ok(ThresholdRun {
        initial,
        steps,
        tableau: tab,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizeReport<T> {
    pub best_x: Vec<T>,
    /// `c·best_x`.
    pub z_upper: T,
    /// Proven lower bound on the optimum; `None` when the objective is
    /// unbounded below.
    pub z_lower: Option<T>,
    pub pivots: usize,
    /// Threshold probes, by kind.
    pub expansion_probes: usize,
    pub bound_probes: usize,
    pub bisection_probes: usize,
}

impl<T: Field> OptimizeReport<T> {
    pub fn is_unbounded(&self) -> bool {
        self.z_lower.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimizeOutcome<T> {
    Solved(OptimizeReport<T>),
    /// The constraints alone are contradictory.
    Infeasible(SolveOutcome<T>),
    LimitExceeded {
        pivots: usize,
    },
}

/// Limits for [`optimize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizeOptions {
    pub solve: SolveOptions,
    pub max_probes: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            solve: SolveOptions::default(),
            max_probes: 512,
        }
    }
}

/// Narrows the optimum of `lp` to within `eps` by moving a single threshold.
///
/// The bare system is solved first (threshold column barred) for a starting
/// point, and the recession system decides boundedness. Then bounds
/// `-c·x >= t` are probed from the last feasible tableau: doubling steps until
/// one is contradictory, after which probes alternate between the tightest
/// proven bound and the midpoint of the remaining gap. Every contradictory
/// probe yields a Farkas ray, and the ray turns into an exact upper bound on
/// `-c·x`. The tableau is restored from the last feasible snapshot after
/// such a probe.
pub fn optimize<T: Field>(
    lp: &LinearProgram<T>,
    eps: &T,
    opts: &OptimizeOptions,
) -> Result<OptimizeOutcome<T>, TableauError> {
    assert!(eps.is_positive(), "eps must be positive");
    let spec = ThresholdSpec::new(vec![T::zero()])?;
    let mut tab = DualTableau::build(lp.system(), Some(lp.c()), Some(&spec))?;
    tab.clear_active_threshold();

    let mut pivots = 0;
    let base = solve(&mut tab, &opts.solve);
    pivots += base.pivots();
    let mut best_x = match base {
        SolveOutcome::Feasible { x, .. } => x,
        SolveOutcome::LimitExceeded { .. } => return Ok(OptimizeOutcome::LimitExceeded { pivots }),
        infeasible => return Ok(OptimizeOutcome::Infeasible(infeasible)),
    };
    let neg_obj = |x: &[T]| -dot(lp.c(), x);
    let mut achieved = neg_obj(&best_x);

    let mut report = OptimizeReport {
        best_x: Vec::new(),
        z_upper: T::zero(),
        z_lower: None,
        pivots: 0,
        expansion_probes: 0,
        bound_probes: 0,
        bisection_probes: 0,
    };

    let mut recession = DualTableau::build(&lp.recession_system(), None, None)?;
    let direction = solve(&mut recession, &opts.solve);
    pivots += direction.pivots();
    match direction {
        SolveOutcome::Feasible { .. } => {
            report.z_upper = -achieved;
            report.best_x = best_x;
            report.pivots = pivots;
            return Ok(OptimizeOutcome::Solved(report));
        }
        SolveOutcome::LimitExceeded { .. } => return Ok(OptimizeOutcome::LimitExceeded { pivots }),
        SolveOutcome::Infeasible { .. } => {}
    }

    tab.set_active_threshold(0)?;
    let mut snapshot = tab.clone();
    // proven: -c·x <= upper for every feasible x
    let mut upper: Option<T> = None;
    let mut step = T::one();
    let mut try_bound_next = false;

    loop {
        if let Some(u) = &upper {
            if u.clone() - achieved.clone() <= *eps {
                break;
            }
        }
        if report.expansion_probes + report.bound_probes + report.bisection_probes
            >= opts.max_probes
        {
            return Ok(OptimizeOutcome::LimitExceeded { pivots });
        }

        let target = match &upper {
            None => {
                report.expansion_probes += 1;
                let t = achieved.clone() + step.clone();
                step = step.clone() + step;
                t
            }
            Some(u) if try_bound_next => {
                report.bound_probes += 1;
                u.clone()
            }
            Some(u) => {
                report.bisection_probes += 1;
                (achieved.clone() + u.clone()) / (T::one() + T::one())
            }
        };
        try_bound_next = false;

        let current = tab
            .active_threshold_value()
            .cloned()
            .expect("threshold column is active");
        tab.adjust_threshold(&(target.clone() - current))?;
        let out = solve(&mut tab, &opts.solve);
        pivots += out.pivots();
        match out {
            SolveOutcome::Feasible { x, .. } => {
                let value = neg_obj(&x);
                debug_assert!(value >= target);
                if value > achieved {
                    achieved = value;
                    best_x = x;
                }
                snapshot = tab.clone();
            }
            SolveOutcome::Infeasible { ray, .. } => {
                let bound = ray_bound(&tab, &ray.y).ok_or(TableauError::NotARay(0))?;
                debug_assert!(bound < target);
                if upper.as_ref().is_none_or(|u| bound < *u) {
                    upper = Some(bound);
                    try_bound_next = true;
                }
                tab = snapshot.clone();
            }
            SolveOutcome::LimitExceeded { .. } => {
                return Ok(OptimizeOutcome::LimitExceeded { pivots })
            }
        }
    }

    report.z_upper = -achieved;
    report.z_lower = upper.map(|u| -u);
    report.best_x = best_x;
    report.pivots = pivots;
    Ok(OptimizeOutcome::Solved(report))
}

/// Upper bound on `-c·x` implied by a ray over the single-threshold extended
/// system: from `u_t(-c) + u_Aᵀ A <= 0` and `Ax >= b` follows
/// `-c·x <= -(u_A·b) / u_t`. `None` when the ray does not use the threshold
/// row, i.e. the bare system is contradictory.
fn ray_bound<T: Field>(tab: &DualTableau<T>, y: &[T]) -> Option<T> {
    let u_t = y.first()?;
    if !u_t.is_positive() {
        return None;
    }
    let rest = dot(&y[1..], tab.system().b());
    Some(-rest / u_t.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimalDualOutcome<T> {
    Optimal {
        x: Vec<T>,
        y: Vec<T>,
        z: T,
        pivots: usize,
    },
    /// The constraints are contradictory; carries the bare system's outcome
    /// with its certificate.
    Infeasible(SolveOutcome<T>),
    /// Constraints feasible (witness `x`) yet no optimal pair exists.
    Unbounded {
        x: Vec<T>,
        pivots: usize,
    },
    LimitExceeded {
        pivots: usize,
    },
}

/// Solves the combined primal-dual system; a solution splits into an optimal
/// `x` and an optimal dual `y` with `c·x = b·y`.
///
/// When the combined system is contradictory the bare constraints are solved
/// to tell an infeasible program from an unbounded one.
pub fn solve_primal_dual<T: Field>(
    lp: &LinearProgram<T>,
    opts: &SolveOptions,
) -> Result<PrimalDualOutcome<T>, TableauError> {
    let combined = lp.primal_dual_system();
    let mut tab = DualTableau::build(&combined, None, None)?;
    let out = solve(&mut tab, opts);
    let pivots = out.pivots();
    match out {
        SolveOutcome::Feasible { mut x, .. } => {
            let y = x.split_off(lp.num_vars());
            let z = dot(lp.c(), &x);
            assert_eq!(
                z,
                dot(lp.system().b(), &y),
                "feasible primal-dual pair must close the duality gap"
            );
            Ok(PrimalDualOutcome::Optimal { x, y, z, pivots })
        }
        SolveOutcome::LimitExceeded { .. } => Ok(PrimalDualOutcome::LimitExceeded { pivots }),
        SolveOutcome::Infeasible { .. } => {
            let mut bare = DualTableau::build(lp.system(), None, None)?;
            let base = solve(&mut bare, opts);
            let pivots = pivots + base.pivots();
            Ok(match base {
                SolveOutcome::Feasible { x, .. } => PrimalDualOutcome::Unbounded { x, pivots },
                SolveOutcome::LimitExceeded { .. } => PrimalDualOutcome::LimitExceeded { pivots },
                infeasible => PrimalDualOutcome::Infeasible(infeasible),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{corpus, klee_minty, InequalitySystem};
    use crate::scalar::{int, rational, Rational};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().copied().map(int).collect()
    }

    fn free_lp(c: &[i64]) -> LinearProgram<Rational> {
        LinearProgram::new(
            ints(c),
            InequalitySystem::new(vec![], vec![], c.len()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn klee_minty_threshold_batch() {
        let spec = ThresholdSpec::new(ints(&[500, 600, 700])).unwrap();
        let run =
            solve_lp_thresholds(&corpus::klee_minty_4(), &spec, &SolveOptions::default()).unwrap();
        assert_eq!(run.steps.len(), 3);
        assert_eq!(
            run.steps[0].outcome.point(),
            Some(&[int(5), int(5), rational(65, 2).unwrap(), int(375)][..])
        );
        assert_eq!(
            run.steps[1].outcome.point(),
            Some(&[rational(25, 8).unwrap(), int(0), int(0), int(575)][..])
        );
        assert!(run.steps[2].outcome.is_infeasible());
        let per_step: Vec<usize> = run.steps.iter().map(|s| s.outcome.pivots()).collect();
        assert_eq!(per_step, vec![4, 3, 1]);
        assert_eq!(run.total_pivots(), 8);
    }

    #[test]
    fn trivial_threshold_needs_no_pivot() {
        // b <= 0 and c >= 0: x = 0 meets -c·x >= 0 immediately
        let lp = LinearProgram::new(
            ints(&[1, 2]),
            InequalitySystem::new(vec![ints(&[1, -1])], ints(&[-3]), 2).unwrap(),
        )
        .unwrap();
        let spec = ThresholdSpec::new(ints(&[0])).unwrap();
        let run = solve_lp_thresholds(&lp, &spec, &SolveOptions::default()).unwrap();
        assert_eq!(run.steps[0].outcome.point(), Some(&ints(&[0, 0])[..]));
        assert_eq!(run.total_pivots(), 0);
    }

    #[test]
    fn example_3_2_threshold_at_optimum() {
        let spec = ThresholdSpec::new(ints(&[-18])).unwrap();
        let run = solve_lp_thresholds(&corpus::example_3_2_lp(), &spec, &SolveOptions::default())
            .unwrap();
        let x = run.steps[0].outcome.point().expect("z <= 18 is attainable");
        assert!(dot(corpus::example_3_2_lp().c(), x) <= int(18));
    }

    #[test]
    fn optimize_klee_minty() {
        let OptimizeOutcome::Solved(r) = optimize(
            &corpus::klee_minty_4(),
            &int(1),
            &OptimizeOptions::default(),
        )
        .unwrap() else {
            panic!("bounded and feasible")
        };
        assert_eq!(r.z_upper, int(-625));
        assert!(r.z_lower.clone().unwrap() >= int(-626));
        assert_eq!(r.best_x, ints(&[0, 0, 0, 625]));
    }

    #[test]
    fn optimize_empty_system() {
        let OptimizeOutcome::Solved(r) =
            optimize(&free_lp(&[1]), &int(1), &OptimizeOptions::default()).unwrap()
        else {
            panic!()
        };
        assert_eq!(
            (r.z_upper.clone(), r.z_lower.clone()),
            (int(0), Some(int(0)))
        );
        assert_eq!(r.best_x, ints(&[0]));
        assert_eq!(r.bisection_probes, 0);
    }

    #[test]
    fn optimize_unbounded() {
        let OptimizeOutcome::Solved(r) =
            optimize(&free_lp(&[-1]), &int(1), &OptimizeOptions::default()).unwrap()
        else {
            panic!()
        };
        assert!(r.is_unbounded());
    }

    #[test]
    fn optimize_infeasible() {
        let lp = LinearProgram::new(
            ints(&[1]),
            InequalitySystem::new(vec![ints(&[-1])], ints(&[1]), 1).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            optimize(&lp, &int(1), &OptimizeOptions::default()).unwrap(),
            OptimizeOutcome::Infeasible(_)
        ));
    }

    #[test]
    fn optimize_fractional_optimum_within_eps() {
        // min -x1 - x2 s.t. -3x1 - 2x2 >= -7, -x1 - 4x2 >= -5: optimum at (9/5, 4/5)
        let lp = LinearProgram::new(
            ints(&[-1, -1]),
            InequalitySystem::new(vec![ints(&[-3, -2]), ints(&[-1, -4])], ints(&[-7, -5]), 2)
                .unwrap(),
        )
        .unwrap();
        let eps = rational(1, 100).unwrap();
        let OptimizeOutcome::Solved(r) = optimize(&lp, &eps, &OptimizeOptions::default()).unwrap()
        else {
            panic!()
        };
        let opt = rational(-13, 5).unwrap();
        let lower = r.z_lower.unwrap();
        assert!(lower <= opt && opt <= r.z_upper);
        assert!(r.z_upper - lower <= eps);
    }

    #[test]
    fn primal_dual_example_3_2() {
        let PrimalDualOutcome::Optimal { x, y, z, pivots } =
            solve_primal_dual(&corpus::example_3_2_lp(), &SolveOptions::default()).unwrap()
        else {
            panic!()
        };
        assert_eq!(z, int(18));
        assert_eq!(dot(corpus::example_3_2_system().b(), &y), int(18));
        assert_eq!(x.len(), 4);
        assert!(pivots <= 6, "{pivots} pivots");
    }

    #[test]
    fn primal_dual_klee_minty() {
        for d in 1..=4 {
            let lp: LinearProgram<Rational> = klee_minty(d).unwrap();
            let PrimalDualOutcome::Optimal { z, .. } =
                solve_primal_dual(&lp, &SolveOptions::default()).unwrap()
            else {
                panic!()
            };
            assert_eq!(z, -int(5i64.pow(d as u32)));
        }
    }

    #[test]
    fn primal_dual_degenerate_cases() {
        let PrimalDualOutcome::Optimal { x, y, z, .. } =
            solve_primal_dual(&free_lp(&[1]), &SolveOptions::default()).unwrap()
        else {
            panic!()
        };
        assert_eq!((x, y, z), (ints(&[0]), vec![], int(0)));
        assert!(matches!(
            solve_primal_dual(&free_lp(&[-1]), &SolveOptions::default()).unwrap(),
            PrimalDualOutcome::Unbounded { .. }
        ));
        let infeasible = LinearProgram::new(
            ints(&[1]),
            InequalitySystem::new(vec![ints(&[-1])], ints(&[1]), 1).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            solve_primal_dual(&infeasible, &SolveOptions::default()).unwrap(),
            PrimalDualOutcome::Infeasible(_)
        ));
    }
}
