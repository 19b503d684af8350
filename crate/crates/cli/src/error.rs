use serde_json::{json, Value};
use tderiv::parse::ParseError;

/// Exit status 1: the input could not be read, parsed or validated.
pub const EXIT_INPUT: u8 = 1;
/// Exit status 2: the input is well formed but the mathematics fails.
pub const EXIT_MATH: u8 = 2;

#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub span: Option<(usize, usize)>,
    pub position: Option<(usize, usize)>,
    pub exit: u8,
}

impl CliError {
    pub fn input(code: &'static str, message: impl ToString) -> Self {
        CliError { code, message: message.to_string(), span: None, position: None, exit: EXIT_INPUT }
    }

    pub fn math(code: &'static str, message: impl ToString) -> Self {
        CliError { code, message: message.to_string(), span: None, position: None, exit: EXIT_MATH }
    }

    pub fn to_json(&self) -> Value {
        let mut e = json!({
            "code": self.code,
            "message": self.message,
            "span": self.span.map(|(a, b)| json!([a, b])),
        });
        if let Some((line, column)) = self.position {
            e["line"] = json!(line);
            e["column"] = json!(column);
        }
        json!({ "ok": false, "error": e })
    }

    pub fn render(&self) -> String {
        match self.position {
            Some((l, c)) => format!("error[{}]: line {l}, column {c}: {}", self.code, self.message),
            None => format!("error[{}]: {}", self.code, self.message),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError {
            code: "parse",
            message: e.message,
            span: Some(e.span),
            position: Some((e.line, e.column)),
            exit: EXIT_INPUT,
        }
    }
}
