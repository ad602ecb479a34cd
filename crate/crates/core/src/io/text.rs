//! Line-oriented text format:
//!
//! ```text
//! # comment
//! vars 3
//! min 1 0 2          (optional; makes it a linear program)
//! row 1 3 0 >= 2
//! ```

use crate::model::{InequalitySystem, LinearProgram, Problem};
use crate::scalar::{parse_rational, Rational};

use super::FormatError;

fn numbers(line: usize, tokens: &[&str], expected: usize) -> Result<Vec<Rational>, FormatError> {
    if tokens.len() != expected {
        return Err(FormatError::Text {
            line,
            message: format!("expected {expected} numbers, found {}", tokens.len()),
        });
    }
    tokens
        .iter()
        .map(|t| {
            parse_rational(t).map_err(|e| FormatError::Text {
                line,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn parse_text(input: &str) -> Result<Problem<Rational>, FormatError> {
    let mut n: Option<usize> = None;
    let mut objective: Option<Vec<Rational>> = None;
    let mut a = Vec::new();
    let mut b = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| FormatError::Text { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, rest)) = tokens.split_first() else {
            continue;
        };
        match keyword {
            "vars" => {
                if n.is_some() {
                    return Err(err("duplicate `vars`".into()));
                }
                let [count] = rest else {
                    return Err(err("`vars` takes one count".into()));
                };
                let count: usize = count
                    .parse()
                    .ok()
                    .filter(|&c| c > 0)
                    .ok_or_else(|| err(format!("bad variable count `{count}`")))?;
                n = Some(count);
            }
            "min" | "row" => {
                let vars = n.ok_or_else(|| err(format!("`{keyword}` before `vars`")))?;
                if keyword == "min" {
                    if objective.is_some() {
                        return Err(err("duplicate `min`".into()));
                    }
                    objective = Some(numbers(line, rest, vars)?);
                } else {
                    let Some(split) = rest.iter().position(|t| *t == ">=") else {
                        return Err(err("row needs `>=`".into()));
                    };
                    let coeffs = numbers(line, &rest[..split], vars)?;
                    let rhs = numbers(line, &rest[split + 1..], 1)?;
                    a.push(coeffs);
                    b.extend(rhs);
                }
            }
            other => return Err(err(format!("unknown keyword `{other}`"))),
        }
    }

    let n = n.ok_or(FormatError::Text {
        line: input.lines().count().max(1),
        message: "missing `vars`".into(),
    })?;
    let model_err = |e: crate::model::ModelError| FormatError::Text {
        line: 0,
        message: e.to_string(),
    };
    let system = InequalitySystem::new(a, b, n).map_err(model_err)?;
    Ok(match objective {
        Some(c) => Problem::Program(LinearProgram::new(c, system).map_err(model_err)?),
        None => Problem::System(system),
    })
}

fn join(v: &[Rational]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn emit_text(problem: &Problem<Rational>) -> String {
    let system = problem.system();
    let mut out = format!("vars {}\n", system.num_vars());
    if let Some(lp) = problem.program() {
        out.push_str(&format!("min {}\n", join(lp.c())));
    }
    for (row, rhs) in system.a().iter().zip(system.b()) {
        out.push_str(&format!("row {} >= {}\n", join(row), rhs));
    }
    out
}
