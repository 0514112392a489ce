use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("genericity violated: {0}")]
    Genericity(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("below noise floor: {0}")]
    BelowNoise(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("one-form family has a pole of order {0} in eps")]
    Pole(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::UnknownVariable(_) => "unknown_variable",
            Error::Invalid(_) => "invalid",
            Error::Genericity(_) => "genericity",
            Error::Undetermined(_) => "undetermined",
            Error::BelowNoise(_) => "below_noise",
            Error::Integration(_) => "integration",
            Error::Pole(_) => "pole",
        }
    }

    pub(crate) fn parse_at(text: &str, byte: usize, message: impl Into<String>) -> Error {
        let (line, column) = line_col(text, byte);
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, byte: usize) -> (usize, usize) {
    let byte = byte.min(text.len());
    let before = &text[..byte];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}
