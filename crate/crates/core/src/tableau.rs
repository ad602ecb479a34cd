//! The dual tableau.
//!
//! For `Ax >= b, x >= 0` the tableau represents the dual problem
//! `max b·y` subject to `yA + Is = 0, y, s >= 0`. It has one row per primal
//! variable and one column per dual variable: first the objective-threshold
//! columns (descending `t`), then one column per constraint of `A`, then the
//! slack block `I`. Every right-hand side is zero and is not stored.
//!
//! The w-row holds the reduced costs. At any basis it equals `b_i - A_i·x` in
//! constraint columns and `-x_j` in slack columns, where `x` is the current
//! trial point; see [`DualTableau::current_point`].

use std::cmp::Ordering;

use thiserror::Error;

use crate::model::{InequalitySystem, ModelError, ThresholdSpec};
use crate::scalar::{lex_compare, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("thresholds require an objective")]
    ThresholdsWithoutObjective,
    #[error("objective has length {found}, expected {expected}")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("index ({row}, {col}) is outside the tableau")]
    OutOfRange { row: usize, col: usize },
    #[error("pivot entry at ({row}, {col}) is zero")]
    ZeroPivot { row: usize, col: usize },
    #[error("column {0} is not a threshold column")]
    NotThreshold(usize),
    #[error("tableau has no active threshold column")]
    NoActiveThreshold,
    #[error("column {0} does not certify infeasibility")]
    NotARay(usize),
}

/// What a tableau column stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnKind<T> {
    /// Dual variable of the appended constraint `-c·x >= t`.
    Threshold { t: T },
    /// Dual variable of constraint `row` (0-based) of the system.
    Dual { row: usize },
    /// Slack `s_var` of the dual equality for primal variable `var`.
    Slack { var: usize },
}

impl<T> ColumnKind<T> {
    pub fn is_threshold(&self) -> bool {
        matches!(self, ColumnKind::Threshold { .. })
    }
}

/// Numeric content of a tableau at one moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauSnapshot<T> {
    pub w_row: Vec<T>,
    pub rows: Vec<Vec<T>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualTableau<T> {
    rows: Vec<Vec<T>>,
    w_row: Vec<T>,
    cols: Vec<ColumnKind<T>>,
    basis: Vec<usize>,
    active_threshold: Option<usize>,
    pivot_count: usize,
    fallback_engaged: bool,
    system: InequalitySystem<T>,
    objective: Option<Vec<T>>,
}

impl<T: Field> DualTableau<T> {
    /// Builds the starting tableau with the slack block as basis.
    ///
    /// With thresholds, the column of the smallest `t` starts out active.
    pub fn build(
        system: &InequalitySystem<T>,
        objective: Option<&[T]>,
        thresholds: Option<&ThresholdSpec<T>>,
    ) -> Result<Self, TableauError> {
        let n = system.num_vars();
        let m = system.num_rows();
        if let Some(c) = objective {
            if c.len() != n {
                return Err(TableauError::ObjectiveLength {
                    expected: n,
                    found: c.len(),
                });
            }
        }
        let ts: Vec<T> = match (thresholds, objective) {
            (Some(_), None) => return Err(TableauError::ThresholdsWithoutObjective),
            (Some(spec), Some(_)) => spec.values().iter().rev().cloned().collect(),
            (None, _) => Vec::new(),
        };
        let k = ts.len();

        let mut cols = Vec::with_capacity(k + m + n);
        cols.extend(ts.iter().map(|t| ColumnKind::Threshold { t: t.clone() }));
        cols.extend((0..m).map(|row| ColumnKind::Dual { row }));
        cols.extend((0..n).map(|var| ColumnKind::Slack { var }));

        let mut w_row = ts.clone();
        w_row.extend(system.b().iter().cloned());
        w_row.extend(std::iter::repeat_n(T::zero(), n));

        let rows = (0..n)
            .map(|j| {
                let mut row = Vec::with_capacity(k + m + n);
                if let Some(c) = objective {
                    row.extend(std::iter::repeat_n(-c[j].clone(), k));
                }
                row.extend(system.a().iter().map(|a| a[j].clone()));
                row.extend((0..n).map(|i| if i == j { T::one() } else { T::zero() }));
                row
            })
            .collect();

        Ok(Self {
            rows,
            w_row,
            cols,
            basis: (0..n).map(|j| k + m + j).collect(),
            active_threshold: (k > 0).then(|| k - 1),
            pivot_count: 0,
            fallback_engaged: false,
            system: system.clone(),
            objective: objective.map(<[T]>::to_vec),
        })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn w_row(&self) -> &[T] {
        &self.w_row
    }

    pub fn columns(&self) -> &[ColumnKind<T>] {
        &self.cols
    }

    /// Column basic in each row.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn active_threshold(&self) -> Option<usize> {
        self.active_threshold
    }

    /// Pivots performed over the tableau's whole life.
    pub fn pivot_count(&self) -> usize {
        self.pivot_count
    }

    /// Whether a solve ever detected a repeated basis and switched to the
    /// smallest-index rule.
    pub fn fallback_engaged(&self) -> bool {
        self.fallback_engaged
    }

    pub(crate) fn engage_fallback(&mut self) {
        self.fallback_engaged = true;
    }

    pub fn system(&self) -> &InequalitySystem<T> {
        &self.system
    }

    pub fn objective(&self) -> Option<&[T]> {
        self.objective.as_deref()
    }

    pub fn threshold_count(&self) -> usize {
        self.cols.iter().take_while(|c| c.is_threshold()).count()
    }

    /// Current bound of the active threshold column.
    pub fn active_threshold_value(&self) -> Option<&T> {
        match &self.cols[self.active_threshold?] {
            ColumnKind::Threshold { t } => Some(t),
            _ => None,
        }
    }

    pub fn snapshot(&self) -> TableauSnapshot<T> {
        TableauSnapshot {
            w_row: self.w_row.clone(),
            rows: self.rows.clone(),
        }
    }

    /// Inactive threshold columns may never enter.
    pub fn is_eligible(&self, col: usize) -> bool {
        !self.cols[col].is_threshold() || self.active_threshold == Some(col)
    }

    /// Largest positive w-row entry among eligible columns, ties to the
    /// highest index.
    pub fn select_entering(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (col, w) in self.w_row.iter().enumerate() {
            if !w.is_positive() || !self.is_eligible(col) {
                continue;
            }
            if best.is_none_or(|b| *w >= self.w_row[b]) {
                best = Some(col);
            }
        }
        best
    }

    /// Smallest-index eligible column with a positive w-row entry.
    pub fn select_entering_lowest(&self) -> Option<usize> {
        (0..self.num_cols()).find(|&c| self.w_row[c].is_positive() && self.is_eligible(c))
    }

    /// Among rows with a positive entry in `col`, the one whose row divided by
    /// that entry is lexicographically smallest. `None` means the dual is
    /// unbounded along `col`.
    pub fn select_leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, Vec<T>)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            let entry = &row[col];
            if !entry.is_positive() {
                continue;
            }
            let scaled: Vec<T> = row.iter().map(|v| v.clone() / entry.clone()).collect();
            let better = match &best {
                None => true,
                Some((_, current)) => {
                    lex_compare(&scaled, current).expect("rows share a width") == Ordering::Less
                }
            };
            if better {
                best = Some((r, scaled));
            }
        }
        best.map(|(r, _)| r)
    }

    /// Among rows with a positive entry in `col`, the one whose basic column
    /// has the smallest index.
    pub fn select_leaving_lowest(&self, col: usize) -> Option<usize> {
        (0..self.num_rows())
            .filter(|&r| self.rows[r][col].is_positive())
            .min_by_key(|&r| self.basis[r])
    }

    /// Gauss-Jordan step on `(row, col)`.
    pub fn pivot(&mut self, row: usize, col: usize) -> Result<(), TableauError> {
        if row >= self.num_rows() || col >= self.num_cols() {
            return Err(TableauError::OutOfRange { row, col });
        }
        let p = self.rows[row][col].clone();
        if p.is_zero() {
            return Err(TableauError::ZeroPivot { row, col });
        }
        if !p.is_one() {
            for v in &mut self.rows[row] {
                *v = v.clone() / p.clone();
            }
        }
        let pivot_row = self.rows[row].clone();
        let eliminate = |target: &mut Vec<T>| {
            let f = target[col].clone();
            if f.is_zero() {
                return;
            }
            for (v, pv) in target.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        };
        for (r, target) in self.rows.iter_mut().enumerate() {
            if r != row {
                eliminate(target);
            }
        }
        eliminate(&mut self.w_row);
        self.basis[row] = col;
        self.pivot_count += 1;
        debug_assert_eq!(self.check_invariants(), Ok(()));
        Ok(())
    }

    /// Trial point read off the w-row: `x_j = -w[slack j]`.
    pub fn current_point(&self) -> Vec<T> {
        let first_slack = self.num_cols() - self.num_rows();
        self.w_row[first_slack..]
            .iter()
            .map(|v| -v.clone())
            .collect()
    }

    /// Lets threshold column `col` enter from now on; every other threshold
    /// column is barred.
    pub fn set_active_threshold(&mut self, col: usize) -> Result<(), TableauError> {
        match self.cols.get(col) {
            Some(ColumnKind::Threshold { .. }) => {
                self.active_threshold = Some(col);
                Ok(())
            }
            _ => Err(TableauError::NotThreshold(col)),
        }
    }

    /// Bars every threshold column; solving then decides the bare system.
    pub fn clear_active_threshold(&mut self) {
        self.active_threshold = None;
    }

    /// Moves the active bound from `t` to `t + delta`.
    ///
    /// The column's w-row entry grows by `delta`. When the column is basic the
    /// change is immediately eliminated through its row so the w-row stays in
    /// canonical form; the resulting numbers equal those of re-entering an
    /// identical column carrying the new bound.
    pub fn adjust_threshold(&mut self, delta: &T) -> Result<(), TableauError> {
        if self.threshold_count() == 0 {
            return Err(TableauError::NotThreshold(0));
        }
        let col = self
            .active_threshold
            .ok_or(TableauError::NoActiveThreshold)?;
        if delta.is_zero() {
            return Ok(());
        }
        if let ColumnKind::Threshold { t } = &mut self.cols[col] {
            *t = t.clone() + delta.clone();
        }
        match self.basis.iter().position(|&b| b == col) {
            Some(r) => {
                for (w, v) in self.w_row.iter_mut().zip(&self.rows[r]) {
                    if !v.is_zero() {
                        *w = w.clone() - delta.clone() * v.clone();
                    }
                }
                self.w_row[col] = T::zero();
            }
            None => self.w_row[col] = self.w_row[col].clone() + delta.clone(),
        }
        Ok(())
    }

    /// The system the dual columns stand for: one row per threshold column
    /// (`-c·x >= t`, current `t`), then the rows of `A`, in column order.
    pub fn extended_system(&self) -> InequalitySystem<T> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for kind in &self.cols {
            match kind {
                ColumnKind::Threshold { t } => {
                    let c = self
                        .objective
                        .as_ref()
                        .expect("threshold implies objective");
                    a.push(c.iter().map(|v| -v.clone()).collect());
                    b.push(t.clone());
                }
                ColumnKind::Dual { row } => {
                    let (r, rhs) = self.system.row(*row);
                    a.push(r.to_vec());
                    b.push(rhs.clone());
                }
                ColumnKind::Slack { .. } => {}
            }
        }
        InequalitySystem::new(a, b, self.system.num_vars()).expect("built from a valid system")
    }

    /// Structural invariants: unit basic columns with zero reduced cost,
    /// identical threshold columns, and w-row gaps between threshold columns
    /// equal to their bound gaps.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (r, &col) in self.basis.iter().enumerate() {
            if !self.w_row[col].is_zero() {
                return Err(format!("basic column {col} has non-zero reduced cost"));
            }
            for (i, row) in self.rows.iter().enumerate() {
                let expect = if i == r { T::one() } else { T::zero() };
                if row[col] != expect {
                    return Err(format!("basic column {col} is not unit in row {r}"));
                }
            }
        }
        let k = self.threshold_count();
        for j in 1..k {
            if self.rows.iter().any(|row| row[j] != row[0]) {
                return Err(format!("threshold column {j} differs from column 0"));
            }
            let (ColumnKind::Threshold { t: t0 }, ColumnKind::Threshold { t: tj }) =
                (&self.cols[0], &self.cols[j])
            else {
                unreachable!()
            };
            if self.w_row[0].clone() - self.w_row[j].clone() != t0.clone() - tj.clone() {
                return Err(format!("threshold column {j} w-row gap drifted"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::corpus;
    use crate::scalar::{int, parse_rational, Rational};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().copied().map(int).collect()
    }

    fn decimals(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    fn example_3_1() -> DualTableau<Rational> {
        DualTableau::build(&corpus::example_3_1(), None, None).unwrap()
    }

    fn km_thresholds() -> DualTableau<Rational> {
        let km = corpus::klee_minty_4();
        let spec = ThresholdSpec::new(ints(&[500, 600, 700])).unwrap();
        DualTableau::build(km.system(), Some(km.c()), Some(&spec)).unwrap()
    }

    #[test]
    fn build_example_3_1() {
        let tab = example_3_1();
        assert_eq!(tab.w_row(), &ints(&[2, 1, -2, 0, 0, 0])[..]);
        assert_eq!(tab.rows()[0], ints(&[1, 0, -1, 1, 0, 0]));
        assert_eq!(tab.rows()[1], ints(&[3, 1, 0, 0, 1, 0]));
        assert_eq!(tab.rows()[2], ints(&[0, 0, 1, 0, 0, 1]));
        assert_eq!(tab.basis(), &[3, 4, 5]);
        assert_eq!(tab.active_threshold(), None);
        assert_eq!(tab.check_invariants(), Ok(()));
    }

    #[test]
    fn build_klee_minty_thresholds() {
        let tab = km_thresholds();
        assert_eq!(
            tab.w_row(),
            &ints(&[700, 600, 500, -5, -25, -125, -625, 0, 0, 0, 0])[..]
        );
        assert_eq!(tab.rows()[0], ints(&[8, 8, 8, -1, -4, -8, -16, 1, 0, 0, 0]));
        assert_eq!(tab.active_threshold(), Some(2));
        assert_eq!(tab.active_threshold_value(), Some(&int(500)));
        assert_eq!(tab.columns()[0], ColumnKind::Threshold { t: int(700) });
        assert_eq!(tab.columns()[3], ColumnKind::Dual { row: 0 });
        assert_eq!(tab.columns()[10], ColumnKind::Slack { var: 3 });
    }

    #[test]
    fn build_empty_system() {
        let s = InequalitySystem::<Rational>::new(vec![], vec![], 2).unwrap();
        let tab = DualTableau::build(&s, None, None).unwrap();
        assert_eq!(tab.rows(), &[ints(&[1, 0]), ints(&[0, 1])][..]);
        assert_eq!(tab.w_row(), &ints(&[0, 0])[..]);
        assert_eq!(tab.select_entering(), None);
    }

    #[test]
    fn build_errors() {
        let s = corpus::example_3_1();
        let spec = ThresholdSpec::new(ints(&[1])).unwrap();
        assert_eq!(
            DualTableau::build(&s, None, Some(&spec)),
            Err(TableauError::ThresholdsWithoutObjective)
        );
        assert!(matches!(
            DualTableau::build(&s, Some(&ints(&[1, 2])), None),
            Err(TableauError::ObjectiveLength { .. })
        ));
    }

    #[test]
    fn entering_examples() {
        let mut tab = example_3_1();
        assert_eq!(tab.select_entering(), Some(0));

        // Klee-Minty table 2: columns 6 and 7 (1-based) tie at 375; the
        // higher index wins.
        let mut km = km_thresholds();
        km.pivot(0, 2).unwrap();
        assert_eq!(
            km.w_row(),
            &decimals(&["200", "100", "0", "57,5", "225", "375", "375", "-62,5", "0", "0", "0"])[..]
        );
        assert_eq!(km.select_entering(), Some(6));

        tab.pivot(0, 0).unwrap();
        tab.pivot(1, 1).unwrap();
        tab.pivot(0, 3).unwrap();
        assert_eq!(tab.w_row(), &ints(&[-1, 0, -2, 0, -1, 0])[..]);
        assert_eq!(tab.select_entering(), None);
        assert_eq!(tab.select_entering_lowest(), None);
    }

    #[test]
    fn inactive_thresholds_never_enter() {
        let mut km = km_thresholds();
        km.pivot(0, 2).unwrap();
        // columns 0 and 1 have w 200 and 100 but are barred
        assert!(!km.is_eligible(0) && !km.is_eligible(1) && km.is_eligible(2));
        assert_eq!(km.select_entering_lowest(), Some(3));
    }

    #[test]
    fn leaving_examples() {
        let tab = example_3_1();
        assert_eq!(tab.select_leaving(0), Some(0));
        assert_eq!(tab.select_leaving(1), Some(1));
        assert_eq!(tab.select_leaving(2), Some(2));
        assert_eq!(tab.select_leaving_lowest(0), Some(0));
        let km = km_thresholds();
        assert_eq!(km.select_leaving(2), Some(0));
        assert_eq!(km.select_leaving(3), None);
    }

    #[test]
    fn pivot_example_3_1_table_2() {
        let mut tab = example_3_1();
        tab.pivot(0, 0).unwrap();
        assert_eq!(tab.w_row(), &ints(&[0, 1, 0, -2, 0, 0])[..]);
        assert_eq!(tab.rows()[0], ints(&[1, 0, -1, 1, 0, 0]));
        assert_eq!(tab.rows()[1], ints(&[0, 1, 3, -3, 1, 0]));
        assert_eq!(tab.rows()[2], ints(&[0, 0, 1, 0, 0, 1]));
        assert_eq!(tab.basis(), &[0, 4, 5]);
        assert_eq!(tab.pivot_count(), 1);
        assert_eq!(tab.current_point(), ints(&[2, 0, 0]));
    }

    #[test]
    fn pivot_on_basic_column_is_identity() {
        let mut tab = example_3_1();
        tab.pivot(0, 0).unwrap();
        let before = tab.snapshot();
        tab.pivot(0, 0).unwrap();
        assert_eq!(tab.snapshot(), before);
        assert_eq!(tab.pivot_count(), 2);
    }

    #[test]
    fn pivot_rejects_zero_entry() {
        let mut tab = example_3_1();
        assert_eq!(
            tab.pivot(0, 1),
            Err(TableauError::ZeroPivot { row: 0, col: 1 })
        );
        assert!(matches!(
            tab.pivot(9, 0),
            Err(TableauError::OutOfRange { .. })
        ));
    }

    #[test]
    fn current_point_along_example_3_1() {
        let mut tab = example_3_1();
        tab.pivot(0, 0).unwrap();
        assert_eq!(tab.current_point(), ints(&[2, 0, 0]));
        tab.pivot(1, 1).unwrap();
        assert_eq!(tab.current_point(), ints(&[-1, 1, 0]));
        tab.pivot(0, 3).unwrap();
        assert_eq!(tab.current_point(), ints(&[0, 1, 0]));
    }

    #[test]
    fn threshold_activation() {
        let mut km = km_thresholds();
        assert_eq!(
            km.set_active_threshold(3),
            Err(TableauError::NotThreshold(3))
        );
        km.set_active_threshold(1).unwrap();
        let before = km.clone();
        km.set_active_threshold(1).unwrap();
        assert_eq!(km, before);
        assert_eq!(km.active_threshold_value(), Some(&int(600)));

        let mut plain = example_3_1();
        assert_eq!(
            plain.adjust_threshold(&int(1)),
            Err(TableauError::NotThreshold(0))
        );
        km.clear_active_threshold();
        assert_eq!(
            km.adjust_threshold(&int(1)),
            Err(TableauError::NoActiveThreshold)
        );
    }

    #[test]
    fn adjust_zero_is_noop() {
        let mut km = km_thresholds();
        let before = km.clone();
        km.adjust_threshold(&int(0)).unwrap();
        assert_eq!(km, before);
        km.adjust_threshold(&int(5)).unwrap();
        assert_eq!(km.w_row()[2], int(505));
        assert_eq!(km.active_threshold_value(), Some(&int(505)));
    }

    #[test]
    fn extended_system_row_order() {
        let km = km_thresholds();
        let ext = km.extended_system();
        assert_eq!(ext.num_rows(), 7);
        assert_eq!(ext.a()[0], ints(&[8, 4, 2, 1]));
        assert_eq!(ext.b()[..3], ints(&[700, 600, 500])[..]);
        assert_eq!(ext.b()[6], int(-625));
    }

    #[test]
    fn generic_over_fixed_width_ratio() {
        use num_rational::Ratio;
        let s = corpus::example_3_1().map_scalar(|v| Ratio::<i64>::from_rational(v).unwrap());
        let mut tab = DualTableau::build(&s, None, None).unwrap();
        tab.pivot(0, 0).unwrap();
        tab.pivot(1, 1).unwrap();
        tab.pivot(0, 3).unwrap();
        let x: Vec<i64> = tab.current_point().iter().map(|v| v.to_integer()).collect();
        assert_eq!(x, vec![0, 1, 0]);
    }
}
