use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Hypothesis(kolmocycle::Error),
    #[error("{0}")]
    Numeric(kolmocycle::Error),
    #[error("{0}")]
    Pole(kolmocycle::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Hypothesis(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
            CliError::Pole(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Hypothesis(_) => "hypothesis",
            CliError::Numeric(_) => "numerical",
            CliError::Pole(_) => "mellin_pole",
            CliError::Io(_) => "io",
        }
    }

    pub fn body(&self) -> String {
        let v = json!({ "error": { "exit_code": self.exit_code(), "kind": self.kind(), "message": self.to_string() } });
        serde_json::to_string_pretty(&v).expect("error body serializes")
    }
}

/// Hypothesis violations map to exit 2, everything else raised by the library to exit 3.
/// A Mellin pole only becomes exit 4 where the cascade needs `d3`, which callers decide.
impl From<kolmocycle::Error> for CliError {
    fn from(e: kolmocycle::Error) -> Self {
        if e.is_hypothesis() {
            CliError::Hypothesis(e)
        } else {
            CliError::Numeric(e)
        }
    }
}
