use std::path::PathBuf;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// 2 when the run is rejected before or while reading its inputs,
    /// 3 when the numerics give out.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation { .. } | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Validation { field, message } => json!({
                "error": "validation",
                "field": field,
                "message": message,
            }),
            CliError::Numerical(message) => json!({
                "error": "numerical",
                "message": message,
            }),
            CliError::Io { path, source } => json!({
                "error": "io",
                "path": path.display().to_string(),
                "message": source.to_string(),
            }),
        }
    }
}

impl From<expsys::Error> for CliError {
    fn from(e: expsys::Error) -> Self {
        match e {
            expsys::Error::Numerical(m) => CliError::Numerical(m),
            expsys::Error::InvalidParameter { name, reason } => CliError::invalid(name, reason),
            other => CliError::invalid("input", other.to_string()),
        }
    }
}
