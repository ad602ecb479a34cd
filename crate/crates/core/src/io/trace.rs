//! JSON-lines solve traces. Column and row numbers are 1-based, matching
//! the rendered tables.

use serde_json::{json, Value};

use crate::lp::ThresholdRun;
use crate::scalar::Field;
use crate::solve::{PivotRecord, SolveOutcome};

fn strings<T: Field>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn pivot_line<T: Field>(step: usize, rec: &PivotRecord<T>) -> Value {
    let mut line = json!({
        "step": step,
        "entering_col": rec.entering + 1,
        "leaving_row": rec.leaving + 1,
        "pivot_value": rec.pivot_value.to_string(),
    });
    if let Some(after) = &rec.after {
        line["w_row_after"] = json!(strings(&after.w_row));
    }
    line
}

/// The terminal state of a solve as a JSON object.
pub fn outcome_json<T: Field>(outcome: &SolveOutcome<T>) -> Value {
    match outcome {
        SolveOutcome::Feasible { x, pivots, .. } => json!({
            "verdict": "feasible",
            "x": strings(x),
            "pivots": pivots,
        }),
        SolveOutcome::Infeasible {
            entering,
            ray,
            last_point,
            violated,
            pivots,
            ..
        } => json!({
            "verdict": "infeasible",
            "entering_col": entering + 1,
            "farkas": strings(&ray.y),
            "slack_ray": strings(&ray.s),
            "last_point": strings(last_point),
            "violated_rows": violated.iter().map(|r| r + 1).collect::<Vec<_>>(),
            "pivots": pivots,
        }),
        SolveOutcome::LimitExceeded { pivots, .. } => json!({
            "verdict": "limit_exceeded",
            "pivots": pivots,
        }),
    }
}

/// One line per pivot, then a verdict line. `w_row_after` is present when
/// the solve recorded tableaux.
pub fn emit_trace<T: Field>(outcome: &SolveOutcome<T>) -> String {
    let mut out = String::new();
    for (i, rec) in outcome.trace().iter().enumerate() {
        out.push_str(&pivot_line(i + 1, rec).to_string());
        out.push('\n');
    }
    out.push_str(&outcome_json(outcome).to_string());
    out.push('\n');
    out
}

/// Pivot lines numbered across the whole run, each threshold's verdict line
/// (with `t`) following its pivots.
pub fn emit_threshold_trace<T: Field>(run: &ThresholdRun<T>) -> String {
    let mut out = String::new();
    let mut step = 0;
    for s in &run.steps {
        for rec in s.outcome.trace() {
            step += 1;
            out.push_str(&pivot_line(step, rec).to_string());
            out.push('\n');
        }
        let mut verdict = outcome_json(&s.outcome);
        verdict["t"] = json!(s.t.to_string());
        out.push_str(&verdict.to_string());
        out.push('\n');
    }
    out
}
