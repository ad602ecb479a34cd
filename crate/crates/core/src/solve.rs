//! Pivot loop over a [`DualTableau`] and its two terminal states: a feasible
//! point or an unbounded dual ray.

use std::collections::HashSet;

use crate::scalar::{dot, Field};
use crate::tableau::{ColumnKind, DualTableau, TableauError, TableauSnapshot};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Pivot budget per solve call; `None` means `10 * columns`.
    pub max_pivots: Option<usize>,
    /// Keep a copy of the tableau after every pivot in the trace.
    pub record_tableaux: bool,
}

impl SolveOptions {
    pub fn with_max_pivots(max_pivots: usize) -> Self {
        Self {
            max_pivots: Some(max_pivots),
            ..Self::default()
        }
    }

    pub fn recording() -> Self {
        Self {
            record_tableaux: true,
            ..Self::default()
        }
    }
}

/// One pivot. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotRecord<T> {
    pub entering: usize,
    pub leaving: usize,
    pub pivot_value: T,
    pub after: Option<TableauSnapshot<T>>,
}

/// Unbounded direction of the dual, indexed like the tableau columns.
///
/// `y` covers the threshold and constraint columns (the rows of
/// [`DualTableau::extended_system`]), `s` the slack columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasRay<T> {
    pub y: Vec<T>,
    pub s: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome<T> {
    Feasible {
        x: Vec<T>,
        pivots: usize,
        trace: Vec<PivotRecord<T>>,
    },
    Infeasible {
        /// Column with positive reduced cost and no positive entry.
        entering: usize,
        ray: FarkasRay<T>,
        /// Trial point at the moment the ray was found.
        last_point: Vec<T>,
        /// Rows of the extended system that `last_point` violates (0-based).
        violated: Vec<usize>,
        pivots: usize,
        trace: Vec<PivotRecord<T>>,
    },
    LimitExceeded {
        pivots: usize,
        trace: Vec<PivotRecord<T>>,
    },
}

impl<T> SolveOutcome<T> {
    pub fn pivots(&self) -> usize {
        match self {
            SolveOutcome::Feasible { pivots, .. }
            | SolveOutcome::Infeasible { pivots, .. }
            | SolveOutcome::LimitExceeded { pivots, .. } => *pivots,
        }
    }

    pub fn trace(&self) -> &[PivotRecord<T>] {
        match self {
            SolveOutcome::Feasible { trace, .. }
            | SolveOutcome::Infeasible { trace, .. }
            | SolveOutcome::LimitExceeded { trace, .. } => trace,
        }
    }

    pub fn point(&self) -> Option<&[T]> {
        match self {
            SolveOutcome::Feasible { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, SolveOutcome::Infeasible { .. })
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            SolveOutcome::Feasible { .. } => "feasible",
            SolveOutcome::Infeasible { .. } => "infeasible",
            SolveOutcome::LimitExceeded { .. } => "limit",
        }
    }
}

fn basis_signature(basis: &[usize]) -> Vec<usize> {
    let mut sig = basis.to_vec();
    sig.sort_unstable();
    sig
}

/// Pivots until no eligible column has a positive reduced cost (feasible),
/// an entering column has no positive entry (infeasible), or the budget runs
/// out.
///
/// Entering is the largest positive reduced cost, leaving the
/// lexicographically smallest scaled row. If a basis repeats within this
/// call, both choices switch to the smallest-index rule for the rest of it.
pub fn solve<T: Field>(tab: &mut DualTableau<T>, opts: &SolveOptions) -> SolveOutcome<T> {
    let budget = opts.max_pivots.unwrap_or(10 * tab.num_cols());
    let mut trace = Vec::new();
    let mut seen = HashSet::from([basis_signature(tab.basis())]);
    let mut lowest_index = false;
    let mut pivots = 0;

    loop {
        let entering = if lowest_index {
            tab.select_entering_lowest()
        } else {
            tab.select_entering()
        };
        let Some(col) = entering else {
            return SolveOutcome::Feasible {
                x: tab.current_point(),
                pivots,
                trace,
            };
        };
        let leaving = if lowest_index {
            tab.select_leaving_lowest(col)
        } else {
            tab.select_leaving(col)
        };
        let Some(row) = leaving else {
            let ray = extract_farkas_ray(tab, col).expect("entering column has no positive entry");
            let last_point = tab.current_point();
            let violated = violated_rows(tab, &last_point);
            return SolveOutcome::Infeasible {
                entering: col,
                ray,
                last_point,
                violated,
                pivots,
                trace,
            };
        };
        if pivots >= budget {
            return SolveOutcome::LimitExceeded { pivots, trace };
        }

        let pivot_value = tab.rows()[row][col].clone();
        tab.pivot(row, col)
            .expect("selected pivot entry is positive");
        pivots += 1;
        trace.push(PivotRecord {
            entering: col,
            leaving: row,
            pivot_value,
            after: opts.record_tableaux.then(|| tab.snapshot()),
        });

        if !seen.insert(basis_signature(tab.basis())) && !lowest_index {
            lowest_index = true;
            tab.engage_fallback();
        }
    }
}

fn violated_rows<T: Field>(tab: &DualTableau<T>, x: &[T]) -> Vec<usize> {
    let ext = tab.extended_system();
    ext.a()
        .iter()
        .zip(ext.b())
        .enumerate()
        .filter(|(_, (row, b))| dot(row, x) < **b)
        .map(|(i, _)| i)
        .collect()
}

/// Reads the unbounded dual direction off column `col`: one unit of the
/// entering variable, and `-rows[r][col]` of the variable basic in row `r`.
///
/// Its `y` part `u` satisfies `u >= 0`, `uᵀA <= 0` and `uᵀb > 0` over
/// [`DualTableau::extended_system`].
pub fn extract_farkas_ray<T: Field>(
    tab: &DualTableau<T>,
    col: usize,
) -> Result<FarkasRay<T>, TableauError> {
    if col >= tab.num_cols()
        || !tab.w_row()[col].is_positive()
        || tab.rows().iter().any(|row| row[col].is_positive())
    {
        return Err(TableauError::NotARay(col));
    }
    let mut by_col = vec![T::zero(); tab.num_cols()];
    by_col[col] = T::one();
    for (row, &basic) in tab.rows().iter().zip(tab.basis()) {
        by_col[basic] = -row[col].clone();
    }
    let split = tab
        .columns()
        .iter()
        .position(|k| matches!(k, ColumnKind::Slack { .. }))
        .unwrap_or(tab.num_cols());
    let s = by_col.split_off(split);
    Ok(FarkasRay { y: by_col, s })
}
