//! Problem files, tableau rendering and trace output.
//!
//! Two input formats carry the same model: a line-oriented text format and
//! JSON with every number as a string. Both are exact.

mod json;
mod render;
mod text;
mod trace;

use thiserror::Error;

use crate::model::Problem;
use crate::scalar::Rational;

pub use json::{emit_json, parse_json};
pub use render::{render_snapshot, render_tableau, RenderStyle};
pub use text::{emit_text, parse_text};
pub use trace::{emit_threshold_trace, emit_trace, outcome_json};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
    #[error("key `{key}`: {message}")]
    Json { key: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    Text,
    Json,
}

/// A parsed problem together with the format it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemDocument {
    pub problem: Problem<Rational>,
    pub format: SourceFormat,
}

impl ProblemDocument {
    /// Sniffs the format: input whose first non-blank character is `{` is
    /// JSON, anything else is text.
    pub fn parse(input: &str) -> Result<Self, FormatError> {
        if input.trim_start().starts_with('{') {
            Ok(Self {
                problem: parse_json(input)?,
                format: SourceFormat::Json,
            })
        } else {
            Ok(Self {
                problem: parse_text(input)?,
                format: SourceFormat::Text,
            })
        }
    }

    /// Writes the problem back in its own format.
    pub fn emit(&self) -> String {
        match self.format {
            SourceFormat::Text => emit_text(&self.problem),
            SourceFormat::Json => emit_json(&self.problem),
        }
    }
}
