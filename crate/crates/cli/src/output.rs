use std::fmt::Write as _;

use nncalc::Error;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// One result in all three renderings; `csv` is `None` for verbs without
/// tabular output.
pub struct Output {
    pub human: String,
    pub json: Value,
    pub csv: Option<String>,
}

impl Output {
    pub fn new(verb: &str, human: String, mut json: Value) -> Self {
        if let Value::Object(map) = &mut json {
            map.insert("verb".into(), json!(verb));
            map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        }
        Self { human, json, csv: None }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => error_kind(e),
            CliError::Io(_) => "IoError",
            CliError::Usage(_) => "UsageError",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io(m) | CliError::Usage(m) => m.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = json!({ "kind": self.kind(), "message": self.message() });
        if let CliError::Lib(e) = self {
            err["witness"] = error_witness(e);
        }
        json!({ "schema_version": SCHEMA_VERSION, "error": err })
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain { .. } => "DomainError",
        Error::Param(_) => "ParamError",
        Error::Parse { .. } => "ParseError",
        Error::Closure { .. } => "ClosureError",
        Error::DivisionByNeutral { .. } => "DivisionByNeutralError",
        Error::Weight(_) => "WeightError",
        Error::Distribution(_) => "DistributionError",
        Error::EntropyDomain { .. } => "EntropyDomainError",
        Error::SingularInput { .. } => "SingularInputError",
        Error::Model(_) => "ModelError",
        Error::Limit(_) => "LimitError",
    }
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| json!(v.to_string()), Value::Number)
}

fn error_witness(e: &Error) -> Value {
    match e {
        Error::Domain { context, value, interval } => {
            json!({ "context": context, "value": number(*value), "interval": interval })
        }
        Error::Parse { position, .. } => json!({ "position": position }),
        Error::Closure { op, a, b, image, codomain } => {
            json!({ "op": op, "a": number(*a), "b": number(*b), "image": number(*image), "codomain": codomain })
        }
        Error::DivisionByNeutral { b } => json!({ "b": number(*b) }),
        Error::EntropyDomain { stage, argument, interval } => {
            json!({ "stage": stage.to_string(), "argument": number(*argument), "interval": interval })
        }
        Error::SingularInput { b1, b2 } => json!({ "b1": number(*b1), "b2": number(*b2) }),
        _ => Value::Null,
    }
}

/// JSON number, or the textual value for infinities.
pub fn num(v: f64) -> Value {
    number(v)
}

pub fn opt_num(v: Option<f64>) -> Value {
    v.map_or(Value::Null, number)
}

/// Rows of a CSV document with a header line.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let cells: Vec<String> = cells.into_iter().map(escape).collect();
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

fn escape(cell: String) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_cells_with_commas() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.row(["1".to_string(), "x, y".to_string()]);
        assert_eq!(csv.finish(), "a,b\n1,\"x, y\"\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Lib(Error::Param("x".into())).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }
}
