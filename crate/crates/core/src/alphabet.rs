use std::fmt;
use std::sync::Arc;

use crate::error::ParseError;

/// Index of a source symbol; dense in `0..σ`, ordered by file appearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub usize);

impl Symbol {
    pub fn index(self) -> usize {
        self.0
    }
}

/// The source alphabet: display names in file order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Names must be unique, non-empty and free of whitespace; at least two symbols.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, ParseError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(ParseError::semantic(0, "alphabet needs at least two symbols"));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(char::is_whitespace) {
                return Err(ParseError::semantic(0, format!("invalid symbol name {n:?}")));
            }
            if matches!(n.as_str(), "-" | "alphabet" | "tables" | "table") || n.starts_with('#') {
                return Err(ParseError::semantic(0, format!("reserved symbol name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(ParseError::semantic(0, format!("duplicate symbol {n:?}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// `a`, `b`, `c`, ... for small test alphabets.
    pub fn letters(sigma: usize) -> Self {
        assert!((2..=26).contains(&sigma));
        Alphabet::new((0..sigma).map(|i| char::from(b'a' + i as u8).to_string())).unwrap()
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    /// σ.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + Clone {
        (0..self.names.len()).map(Symbol)
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name).map(Symbol)
    }

    /// Parses a source sequence. Whitespace-separated names are always
    /// accepted; when every name is a single character, an unbroken string
    /// such as `badb` is read one character per symbol. `-` is λ.
    pub fn parse_seq(&self, text: &str) -> Result<SourceSeq, ParseError> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(SourceSeq::default());
        }
        let tokens: Vec<&str> = if text.contains(char::is_whitespace) {
            text.split_whitespace().collect()
        } else if self.lookup(text).is_some() {
            vec![text]
        } else if self.names.iter().all(|n| n.chars().count() == 1) {
            text.char_indices()
                .map(|(i, c)| &text[i..i + c.len_utf8()])
                .collect()
        } else {
            vec![text]
        };
        tokens
            .into_iter()
            .map(|t| {
                self.lookup(t)
                    .ok_or_else(|| ParseError::semantic(0, format!("unknown symbol {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SourceSeq)
    }

    /// Renders a sequence; single-character alphabets are written without separators.
    pub fn format_seq(&self, x: &SourceSeq) -> String {
        if x.is_empty() {
            return "-".to_string();
        }
        let compact = self.names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = x.iter().map(|&s| self.name(s)).collect();
        parts.join(if compact { "" } else { " " })
    }
}

/// A finite source sequence `x ∈ S*`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSeq(pub Vec<Symbol>);

impl SourceSeq {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        SourceSeq(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn suff(&self) -> SourceSeq {
        SourceSeq(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn concat(&self, other: &SourceSeq) -> SourceSeq {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SourceSeq(v)
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }
}

impl FromIterator<Symbol> for SourceSeq {
    fn from_iter<T: IntoIterator<Item = Symbol>>(iter: T) -> Self {
        SourceSeq(iter.into_iter().collect())
    }
}

impl fmt::Display for SourceSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.0.iter().map(|s| s.0.to_string()).collect();
        write!(f, "[{}]", ids.join(" "))
    }
}
