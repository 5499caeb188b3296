use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A list function or list-sorted position received an urelement.
    #[error("sort error: {op} expects a list, found urelement '{found}")]
    Sort { op: &'static str, found: String },

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unbound variable ${0}")]
    UnboundVariable(String),

    #[error("unknown predicate {0}")]
    UnknownPredicate(String),

    #[error("predicate {name} has arity {expected}, got {found} arguments")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    /// The evaluation step budget or grounding expansion ceiling was hit.
    #[error("resource budget exceeded: {what} (limit {limit})")]
    Budget { what: &'static str, limit: u64 },

    /// Input lies outside the fragment an operation supports.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid structure: {0}")]
    Structure(String),

    /// An oracle or generator guard refused an instance that is too large.
    #[error("guard exceeded: {0}")]
    Guard(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
