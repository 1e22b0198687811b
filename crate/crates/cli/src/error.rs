use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("price {value} on line {line} is not positive")]
    NonPositivePrice { line: usize, value: f64 },

    #[error("value {value} on line {line} is negative")]
    NegativeValue { line: usize, value: f64 },

    #[error("log-returns need at least 2 price rows, found {rows}")]
    TooFewRows { rows: usize },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Estimation(#[from] qstail::Error),

    #[error("cannot write output: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    /// Stable identifier of the error variant.
    pub fn kind(&self) -> String {
        match self {
            CliError::Io { .. } => "io".into(),
            CliError::Parse { .. } => "parse_error".into(),
            CliError::NonPositivePrice { .. } => "non_positive_price".into(),
            CliError::NegativeValue { .. } => "negative_value".into(),
            CliError::TooFewRows { .. } => "too_few_rows".into(),
            CliError::Usage(_) => "usage".into(),
            CliError::Output(_) => "output".into(),
            CliError::Estimation(e) => {
                let debug = format!("{e:?}");
                let variant: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
                to_snake(&variant)
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map_or(0, |p| p.line() as usize);
        CliError::Parse {
            line,
            message: e.to_string(),
        }
    }
}

fn to_snake(s: &str) -> String {
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        if c.is_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.extend(c.to_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}
