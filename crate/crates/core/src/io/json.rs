//! JSON problem format: `{"n": 3, "A": [["1","3","0"], ...], "b": ["2", ...],
//! "c": [...]}`. Numbers travel as strings; native JSON numbers are refused
//! (except the integer `n`).

use serde_json::{json, Map, Value};

use crate::model::{InequalitySystem, LinearProgram, Problem};
use crate::scalar::{parse_rational, Rational};

use super::FormatError;

fn error(key: &str, message: impl Into<String>) -> FormatError {
    FormatError::Json {
        key: key.to_string(),
        message: message.into(),
    }
}

fn number(key: &str, v: &Value) -> Result<Rational, FormatError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| error(key, e.to_string())),
        Value::Number(_) => Err(error(key, "numbers must be strings to stay exact")),
        _ => Err(error(key, "expected a number string")),
    }
}

fn vector(key: &str, v: &Value) -> Result<Vec<Rational>, FormatError> {
    v.as_array()
        .ok_or_else(|| error(key, "expected an array"))?
        .iter()
        .map(|e| number(key, e))
        .collect()
}

pub fn parse_json(input: &str) -> Result<Problem<Rational>, FormatError> {
    let root: Value = serde_json::from_str(input).map_err(|e| error("$", e.to_string()))?;
    let obj: &Map<String, Value> = root
        .as_object()
        .ok_or_else(|| error("$", "expected an object"))?;
    if let Some(unknown) = obj
        .keys()
        .find(|k| !matches!(k.as_str(), "n" | "A" | "b" | "c"))
    {
        return Err(error(unknown, "unknown key"));
    }

    let n = obj
        .get("n")
        .ok_or_else(|| error("n", "missing"))?
        .as_u64()
        .ok_or_else(|| error("n", "expected a non-negative integer"))? as usize;
    let a = obj
        .get("A")
        .ok_or_else(|| error("A", "missing"))?
        .as_array()
        .ok_or_else(|| error("A", "expected an array of rows"))?
        .iter()
        .map(|row| vector("A", row))
        .collect::<Result<Vec<_>, _>>()?;
    let b = vector("b", obj.get("b").ok_or_else(|| error("b", "missing"))?)?;

    let system = InequalitySystem::new(a, b, n).map_err(|e| {
        let key = match e {
            crate::model::ModelError::RaggedMatrix { .. } => "A",
            crate::model::ModelError::NoVariables => "n",
            _ => "b",
        };
        error(key, e.to_string())
    })?;
    Ok(match obj.get("c") {
        Some(c) => Problem::Program(
            LinearProgram::new(vector("c", c)?, system).map_err(|e| error("c", e.to_string()))?,
        ),
        None => Problem::System(system),
    })
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Compact JSON with sorted keys and canonical fraction strings.
pub fn emit_json(problem: &Problem<Rational>) -> String {
    let system = problem.system();
    let mut doc = json!({
        "n": system.num_vars(),
        "A": system.a().iter().map(|r| strings(r)).collect::<Vec<_>>(),
        "b": strings(system.b()),
    });
    if let Some(lp) = problem.program() {
        doc["c"] = json!(strings(lp.c()));
    }
    let mut out = doc.to_string();
    out.push('\n');
    out
}
