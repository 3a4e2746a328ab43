use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol};
use crate::bits::BitSeq;
use crate::error::{Error, ParseError, Result};

/// A code-tuple: `m` code tables `f_i: S → {0,1}*` together with next-table
/// maps `τ_i: S → [m]`. Codewords may repeat within a table and may be λ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CodeTuple {
    alphabet: Arc<Alphabet>,
    codewords: Vec<Vec<BitSeq>>,
    next: Vec<Vec<usize>>,
}

impl CodeTuple {
    /// `codewords[i][s]` is `f_i(s)` and `next[i][s]` is `τ_i(s)`.
    pub fn new(
        alphabet: Arc<Alphabet>,
        codewords: Vec<Vec<BitSeq>>,
        next: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let m = codewords.len();
        if m == 0 || next.len() != m {
            return Err(Error::WrongTableCount {
                expected: m.max(1),
                actual: next.len(),
            });
        }
        for (f, t) in codewords.iter().zip(&next) {
            if f.len() != alphabet.len() || t.len() != alphabet.len() {
                return Err(Error::AlphabetMismatch {
                    tuple: alphabet.len(),
                    dist: f.len().min(t.len()),
                });
            }
            if let Some(&bad) = t.iter().find(|&&j| j >= m) {
                return Err(Error::TableOutOfRange {
                    index: bad,
                    tables: m,
                });
            }
        }
        Ok(CodeTuple {
            alphabet,
            codewords,
            next,
        })
    }

    /// Builds from string rows, one `(codeword, next)` per symbol per table;
    /// symbols are named `a`, `b`, ... Panics on malformed input, so meant for
    /// literals in tests and built-in data.
    pub fn from_rows(rows: &[&[(&str, usize)]]) -> Self {
        let sigma = rows[0].len();
        let alphabet = Arc::new(Alphabet::letters(sigma));
        let codewords = rows
            .iter()
            .map(|t| t.iter().map(|(c, _)| c.parse().expect("bit string")).collect())
            .collect();
        let next = rows
            .iter()
            .map(|t| t.iter().map(|&(_, j)| j).collect())
            .collect();
        CodeTuple::new(alphabet, codewords, next).expect("well-formed rows")
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// `|F|`.
    pub fn num_tables(&self) -> usize {
        self.codewords.len()
    }

    /// σ.
    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + Clone {
        (0..self.sigma()).map(Symbol)
    }

    pub fn tables(&self) -> std::ops::Range<usize> {
        0..self.num_tables()
    }

    pub fn codeword(&self, i: usize, s: Symbol) -> &BitSeq {
        &self.codewords[i][s.0]
    }

    pub fn next(&self, i: usize, s: Symbol) -> usize {
        self.next[i][s.0]
    }

    pub fn table(&self, i: usize) -> &[BitSeq] {
        &self.codewords[i]
    }

    pub fn next_table(&self, i: usize) -> &[usize] {
        &self.next[i]
    }

    pub fn check_table(&self, i: usize) -> Result<()> {
        if i < self.num_tables() {
            Ok(())
        } else {
            Err(Error::TableOutOfRange {
                index: i,
                tables: self.num_tables(),
            })
        }
    }

    pub fn max_codeword_len(&self) -> usize {
        self.codewords
            .iter()
            .flatten()
            .map(BitSeq::len)
            .max()
            .unwrap_or(0)
    }

    /// Same next-table maps, new codewords.
    pub fn with_codewords(&self, codewords: Vec<Vec<BitSeq>>) -> Self {
        assert_eq!(codewords.len(), self.num_tables());
        CodeTuple {
            alphabet: Arc::clone(&self.alphabet),
            codewords,
            next: self.next.clone(),
        }
    }

    /// Whether `f_i` is injective.
    pub fn is_injective(&self, i: usize) -> bool {
        let mut seen: Vec<&BitSeq> = self.codewords[i].iter().collect();
        seen.sort();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Cells where `self` and `other` differ, as `table i, symbol s: x/j vs y/k`.
    /// A different shape is reported as a single entry.
    pub fn differences(&self, other: &CodeTuple) -> Vec<String> {
        if self.alphabet.names() != other.alphabet.names() || self.num_tables() != other.num_tables() {
            return vec!["alphabets or table counts differ".into()];
        }
        let mut out = Vec::new();
        for i in self.tables() {
            for s in self.symbols() {
                let (a, b) = ((self.codeword(i, s), self.next(i, s)), (other.codeword(i, s), other.next(i, s)));
                if a != b {
                    out.push(format!(
                        "table {i}, symbol {}: {}/{} vs {}/{}",
                        self.alphabet.name(s),
                        a.0,
                        a.1,
                        b.0,
                        b.1
                    ));
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        Parser::default().run(text)
    }

    /// The line-oriented file format; `parse` inverts it exactly.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CodeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet {}", self.alphabet.names().join(" "))?;
        writeln!(f, "tables {}", self.num_tables())?;
        for i in self.tables() {
            writeln!(f, "table {i}")?;
            for s in self.symbols() {
                writeln!(
                    f,
                    "{} {} {}",
                    self.alphabet.name(s),
                    self.codeword(i, s),
                    self.next(i, s)
                )?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CodeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tables: Vec<String> = self
            .tables()
            .map(|i| {
                let rows: Vec<String> = self
                    .symbols()
                    .map(|s| format!("{}:{}/{}", self.alphabet.name(s), self.codeword(i, s), self.next(i, s)))
                    .collect();
                rows.join(" ")
            })
            .collect();
        write!(f, "CodeTuple[{}]", tables.join(" | "))
    }
}

#[derive(Default)]
struct Parser {
    alphabet: Option<Alphabet>,
    tables: Option<usize>,
    current: Option<usize>,
    codewords: Vec<Vec<Option<BitSeq>>>,
    next: Vec<Vec<usize>>,
    table_lines: Vec<usize>,
}

impl Parser {
    fn run(mut self, text: &str) -> std::result::Result<CodeTuple, ParseError> {
        let mut last = 0;
        for (idx, raw) in text.lines().enumerate() {
            last = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            self.line(idx + 1, &tokens)?;
        }
        self.finish(last)
    }

    fn line(&mut self, line: usize, tokens: &[&str]) -> std::result::Result<(), ParseError> {
        match tokens[0] {
            "alphabet" => {
                if self.alphabet.is_some() {
                    return Err(ParseError::semantic(line, "repeated 'alphabet' line"));
                }
                let a = Alphabet::new(tokens[1..].iter().copied()).map_err(|e| ParseError {
                    line,
                    kind: e.kind,
                })?;
                self.alphabet = Some(a);
            }
            "tables" => {
                if self.alphabet.is_none() {
                    return Err(ParseError::syntax(line, "'tables' before 'alphabet'"));
                }
                if self.tables.is_some() {
                    return Err(ParseError::semantic(line, "repeated 'tables' line"));
                }
                let m = single_number(line, tokens)?;
                if m == 0 {
                    return Err(ParseError::semantic(line, "a code-tuple needs at least one table"));
                }
                let sigma = self.alphabet.as_ref().map_or(0, Alphabet::len);
                self.tables = Some(m);
                self.codewords = vec![vec![None; sigma]; m];
                self.next = vec![vec![0; sigma]; m];
                self.table_lines = vec![0; m];
            }
            "table" => {
                let m = self
                    .tables
                    .ok_or_else(|| ParseError::syntax(line, "'table' before 'tables'"))?;
                let i = single_number(line, tokens)?;
                let expected = self.current.map_or(0, |c| c + 1);
                if i >= m {
                    return Err(ParseError::semantic(
                        line,
                        format!("table {i} out of range for {m} tables"),
                    ));
                }
                if i != expected {
                    return Err(ParseError::semantic(
                        line,
                        format!("expected 'table {expected}', got 'table {i}'"),
                    ));
                }
                self.check_complete(self.current)?;
                self.current = Some(i);
                self.table_lines[i] = line;
            }
            _ => self.row(line, tokens)?,
        }
        Ok(())
    }

    fn row(&mut self, line: usize, tokens: &[&str]) -> std::result::Result<(), ParseError> {
        let i = self
            .current
            .ok_or_else(|| ParseError::syntax(line, format!("unexpected {:?} outside a table", tokens[0])))?;
        if tokens.len() != 3 {
            return Err(ParseError::syntax(
                line,
                "expected 'symbol codeword next-table'",
            ));
        }
        let alphabet = self.alphabet.as_ref().expect("checked by 'tables'");
        let s = alphabet
            .lookup(tokens[0])
            .ok_or_else(|| ParseError::semantic(line, format!("unknown symbol {:?}", tokens[0])))?;
        let codeword: BitSeq = tokens[1].parse().map_err(|e: ParseError| ParseError { line, ..e })?;
        let j: usize = tokens[2]
            .parse()
            .map_err(|_| ParseError::syntax(line, format!("invalid table index {:?}", tokens[2])))?;
        let m = self.codewords.len();
        if j >= m {
            return Err(ParseError::semantic(
                line,
                format!("next table {j} out of range for {m} tables"),
            ));
        }
        if self.codewords[i][s.0].is_some() {
            return Err(ParseError::semantic(
                line,
                format!("duplicate row for symbol {:?} in table {i}", tokens[0]),
            ));
        }
        self.codewords[i][s.0] = Some(codeword);
        self.next[i][s.0] = j;
        Ok(())
    }

    fn check_complete(&self, table: Option<usize>) -> std::result::Result<(), ParseError> {
        let Some(i) = table else { return Ok(()) };
        let alphabet = self.alphabet.as_ref().expect("checked by 'tables'");
        if let Some(s) = self.codewords[i].iter().position(Option::is_none) {
            return Err(ParseError::semantic(
                self.table_lines[i],
                format!("table {i} has no row for symbol {:?}", alphabet.name(Symbol(s))),
            ));
        }
        Ok(())
    }

    fn finish(mut self, last: usize) -> std::result::Result<CodeTuple, ParseError> {
        if self.tables.is_some() {
            self.check_complete(self.current)?;
        }
        let alphabet = self
            .alphabet
            .take()
            .ok_or_else(|| ParseError::syntax(last, "missing 'alphabet' line"))?;
        let m = self
            .tables
            .ok_or_else(|| ParseError::syntax(last, "missing 'tables' line"))?;
        let seen = self.current.map_or(0, |c| c + 1);
        if seen != m {
            return Err(ParseError::semantic(
                last,
                format!("expected {m} tables, found {seen}"),
            ));
        }
        let codewords = self
            .codewords
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.expect("checked complete")).collect())
            .collect();
        let alphabet = Arc::new(alphabet);
        Ok(CodeTuple {
            alphabet,
            codewords,
            next: self.next,
        })
    }
}

fn single_number(line: usize, tokens: &[&str]) -> std::result::Result<usize, ParseError> {
    if tokens.len() != 2 {
        return Err(ParseError::syntax(line, format!("expected '{} N'", tokens[0])));
    }
    tokens[1]
        .parse()
        .map_err(|_| ParseError::syntax(line, format!("invalid number {:?}", tokens[1])))
}
