use std::fmt;

use thiserror::Error;

/// A failure while reading one of the text formats, tagged with the
/// 1-based line where it was detected (0 when the input as a whole is at fault).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Malformed line: wrong token count, bad bit string, bad number.
    Syntax(String),
    /// Well-formed but inconsistent content: unknown symbol, duplicate row,
    /// table index out of range, probabilities not summing to one.
    Semantic(String),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    pub(crate) fn semantic(line: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            kind: ParseErrorKind::Semantic(msg.into()),
        }
    }

    pub fn is_syntax(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Syntax(_))
    }

    pub fn is_semantic(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Semantic(_))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (what, msg) = match &self.kind {
            ParseErrorKind::Syntax(m) => ("syntax error", m),
            ParseErrorKind::Semantic(m) => ("semantic error", m),
        };
        if self.line == 0 {
            write!(f, "{what}: {msg}")
        } else {
            write!(f, "{what} at line {}: {msg}", self.line)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("alphabet mismatch: code-tuple has {tuple} symbols, distribution has {dist}")]
    AlphabetMismatch { tuple: usize, dist: usize },

    #[error("table index {index} out of range for a {tables}-table code-tuple")]
    TableOutOfRange { index: usize, tables: usize },

    #[error("code-tuple is not extendable: table {table} has an empty one-bit prefix set")]
    NotExtendable { table: usize },

    #[error("code-tuple is not regular: the stationary equations have no unique solution")]
    NotRegular,

    #[error("code-tuple is not in {class}: {reason}")]
    NotInClass { class: &'static str, reason: String },

    #[error("strict-prefix chain of table {table} is ambiguous: symbols {first} and {second} share codeword {codeword}")]
    AmbiguousChain {
        table: usize,
        first: String,
        second: String,
        codeword: String,
    },

    #[error("lambda-codeword recursion does not terminate; cycle through tables {cycle:?}")]
    NonTerminatingRecursion { cycle: Vec<usize> },

    #[error("{operation} is undefined at table {table}, symbol {symbol}: {reason}")]
    Undefined {
        operation: &'static str,
        table: usize,
        symbol: String,
        reason: String,
    },

    #[error("transformation chain exceeded its limit of {limit} steps")]
    StepLimitExceeded { limit: usize },

    #[error("transformation changed the average codeword length from {before} to {after}")]
    LengthNotPreserved { before: String, after: String },

    #[error("expected a {expected}-table code-tuple, got {actual} tables")]
    WrongTableCount { expected: usize, actual: usize },

    #[error("bit stream is not a prefix of any encoding from table {table} (stuck after {consumed} bits)")]
    NoConsistentCompletion { table: usize, consumed: usize },

    #[error("search space is empty: no code-tuple passes the {filter} filter")]
    EmptySpace { filter: String },

    #[error("search space too large: {0}")]
    SpaceTooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
