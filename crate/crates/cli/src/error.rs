use serde_json::{json, Value};

use ppsim::io::canonical_json;
use ppsim::Error;

/// A failure ready for the process boundary: exit status plus a JSON report.
#[derive(Debug)]
pub struct CliError {
    pub exit: u8,
    pub code: &'static str,
    pub message: String,
    pub context: Value,
}

impl CliError {
    pub fn input(message: impl Into<String>, context: Value) -> Self {
        Self {
            exit: 1,
            code: "input",
            message: message.into(),
            context,
        }
    }

    pub fn with_context(mut self, key: &str, value: impl Into<Value>) -> Self {
        if let Value::Object(map) = &mut self.context {
            map.entry(key).or_insert(value.into());
        }
        self
    }

    pub fn to_json(&self) -> String {
        canonical_json(&json!({
            "code": self.code,
            "message": self.message,
            "context": self.context,
        }))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (exit, code, context) = match &e {
            Error::Input(_) => (1, "input", json!({})),
            Error::Syntax { line, column, .. } => {
                (1, "syntax", json!({"line": line, "column": column}))
            }
            Error::Compile { line, .. } => (1, "compile", json!({"line": line})),
            Error::UnknownPreset(name) => (1, "unknown_preset", json!({"name": name})),
            Error::NoSolution {
                starts,
                best_residual,
            } => (
                2,
                "no_solution",
                json!({"starts": starts, "best_residual": best_residual}),
            ),
            Error::Precondition(_) => (3, "precondition", json!({})),
            Error::NotPseudoPure { spread, .. } => {
                (3, "not_pseudo_pure", json!({"spread": spread}))
            }
            Error::Contract(_) => (3, "contract", json!({})),
            Error::UndefinedMetric => (3, "undefined_metric", json!({})),
            Error::ProtocolIncomplete { rank, needed } => (
                3,
                "protocol_incomplete",
                json!({"rank": rank, "needed": needed}),
            ),
        };
        Self {
            exit,
            code,
            message,
            context,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
