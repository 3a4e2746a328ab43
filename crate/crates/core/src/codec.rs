//! Encoder and k-bit lookahead decoder for code-tuples.
//!
//! The decoder reads one bit at a time and emits a symbol as soon as its
//! codeword is in the window and the following `k` bits can start an encoding
//! from its next table. At the end of the stream the remaining window is
//! matched against every source sequence that encodes to it exactly.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{SourceSeq, Symbol};
use crate::analysis;
use crate::bits::BitSeq;
use crate::error::{Error, Result};
use crate::prefix_sets::{self, BitSet, PrefixSets};
use crate::tuple::CodeTuple;

/// At most this many tail completions are listed.
pub const MAX_COMPLETIONS: usize = 16;

/// `f*_start(x)`.
pub fn encode(f: &CodeTuple, start: usize, x: &SourceSeq) -> Result<BitSeq> {
    let mut enc = Encoder::new(f, start)?;
    for &s in x.iter() {
        enc.push(s);
    }
    let out = enc.finish();
    debug_assert_eq!(out, prefix_sets::f_star(f, start, x).0);
    Ok(out)
}

/// Single-use encoder that tracks the current table.
pub struct Encoder<'a> {
    tuple: &'a CodeTuple,
    table: usize,
    out: BitSeq,
}

impl<'a> Encoder<'a> {
    pub fn new(tuple: &'a CodeTuple, start: usize) -> Result<Self> {
        tuple.check_table(start)?;
        Ok(Encoder {
            tuple,
            table: start,
            out: BitSeq::empty(),
        })
    }

    pub fn table(&self) -> usize {
        self.table
    }

    pub fn push(&mut self, s: Symbol) {
        self.out.extend_from(self.tuple.codeword(self.table, s));
        self.table = self.tuple.next(self.table, s);
    }

    pub fn finish(self) -> BitSeq {
        self.out
    }
}

/// What is left once the stream ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DanglingInfo {
    /// Table the tail is read from.
    pub table: usize,
    /// Bits that were read but not attributed to any emitted symbol.
    pub window: BitSeq,
    /// Source sequences that encode to `window` exactly from `table` and do
    /// not end in a zero-length codeword; shortest first, then by symbol order.
    pub completions: Vec<SourceSeq>,
    /// More completions exist than are listed.
    pub truncated: bool,
}

impl DanglingInfo {
    /// Nothing is left to decode.
    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    /// The tail has exactly one reading.
    pub fn is_resolved(&self) -> bool {
        self.window.is_empty() || (self.completions.len() == 1 && !self.truncated)
    }
}

/// The emitted symbols, the tail, and per-symbol bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub symbols: SourceSeq,
    pub tail: DanglingInfo,
    /// For each emitted symbol, how many bits past the end of its codeword had
    /// been read when it was emitted.
    pub delays: Vec<usize>,
    /// Number of steps at which more than one symbol satisfied the lookahead
    /// rule. Always zero for a k-bit delay decodable tuple.
    pub conflicts: usize,
}

impl Decoded {
    pub fn max_delay(&self) -> usize {
        self.delays.iter().copied().max().unwrap_or(0)
    }
}

/// Single-use streaming decoder.
pub struct Decoder<'a> {
    tuple: &'a CodeTuple,
    k: usize,
    /// `P^k_{F,j}` for every table `j`.
    lookahead: Vec<BitSet>,
    decodable: bool,
    table: usize,
    window: BitSeq,
    consumed: usize,
    symbols: SourceSeq,
    delays: Vec<usize>,
    conflicts: usize,
}

impl<'a> Decoder<'a> {
    pub fn new(tuple: &'a CodeTuple, start: usize, k: usize) -> Result<Self> {
        tuple.check_table(start)?;
        let ps = PrefixSets::with_cap(tuple, k.max(prefix_sets::DEFAULT_K_CAP));
        let lookahead = tuple.tables().map(|j| ps.base(j, k)).collect();
        let decodable = analysis::decodability(&ps, k).decodable();
        Ok(Decoder {
            tuple,
            k,
            lookahead,
            decodable,
            table: start,
            window: BitSeq::empty(),
            consumed: 0,
            symbols: SourceSeq::default(),
            delays: Vec::new(),
            conflicts: 0,
        })
    }

    /// Whether the tuple passed the k-bit delay check.
    pub fn decodable(&self) -> bool {
        self.decodable
    }

    pub fn table(&self) -> usize {
        self.table
    }

    pub fn decoded(&self) -> &SourceSeq {
        &self.symbols
    }

    pub fn push_bit(&mut self, bit: bool) {
        self.window.push(bit);
        self.drain();
    }

    /// Symbols that satisfy the lookahead rule on the current window, shortest
    /// codeword first.
    fn qualifying(&self) -> Vec<Symbol> {
        let f = self.tuple;
        let mut found: Vec<Symbol> = f
            .symbols()
            .filter(|&s| {
                let w = f.codeword(self.table, s);
                w.len() + self.k <= self.window.len()
                    && w.is_prefix_of(&self.window)
                    && self.lookahead[f.next(self.table, s)]
                        .contains(&self.window.skip(w.len()).take(self.k))
            })
            .collect();
        found.sort_by_key(|&s| (f.codeword(self.table, s).len(), s));
        found
    }

    fn emit(&mut self, s: Symbol) {
        let w = self.tuple.codeword(self.table, s);
        self.delays.push(self.window.len() - w.len());
        self.consumed += w.len();
        self.window = self.window.skip(w.len());
        self.table = self.tuple.next(self.table, s);
        self.symbols.push(s);
    }

    /// Emits greedily until no symbol qualifies. A run of zero-length
    /// emissions longer than the table count would revisit a table without
    /// consuming anything, so the run is cut there.
    fn drain(&mut self) {
        let mut idle = 0;
        loop {
            let found = self.qualifying();
            let Some(&s) = found.first() else {
                return;
            };
            if found.len() > 1 {
                debug_assert!(
                    !self.decodable,
                    "two symbols qualify in a {}-bit delay decodable tuple",
                    self.k
                );
                self.conflicts += 1;
            }
            if self.tuple.codeword(self.table, s).is_empty() {
                idle += 1;
                if idle > self.tuple.num_tables() {
                    return;
                }
            } else {
                idle = 0;
            }
            self.emit(s);
        }
    }

    /// Ends the stream: emits symbols on which every completion of the tail
    /// agrees, then reports what remains.
    pub fn finish(mut self) -> Result<Decoded> {
        if !prefix_sets::p_star_contains(self.tuple, self.table, &self.window) {
            return Err(Error::NoConsistentCompletion {
                table: self.table,
                consumed: self.consumed,
            });
        }
        let (completions, truncated) = loop {
            if self.window.is_empty() {
                break (Vec::new(), false);
            }
            let (completions, truncated) =
                completions(self.tuple, self.table, &self.window, self.k);
            let first = completions.first().and_then(SourceSeq::first);
            let unanimous = !truncated
                && first.is_some()
                && completions.iter().all(|x| x.first() == first);
            match first {
                Some(s) if unanimous => self.emit(s),
                _ => break (completions, truncated),
            }
        };
        Ok(Decoded {
            symbols: self.symbols,
            tail: DanglingInfo {
                table: self.table,
                window: self.window,
                completions,
                truncated,
            },
            delays: self.delays,
            conflicts: self.conflicts,
        })
    }
}

/// Source sequences `x` with `f*_i(x) = w` whose last codeword is nonempty,
/// found breadth first up to `|F|·(k+1)` symbols (or `|F|·(|w|+1)` when
/// that is larger, so every bit of the window can be covered). Runs of more
/// than `|F|` zero-length codewords revisit a table and are cut, which counts
/// as truncation. Returns at most [`MAX_COMPLETIONS`] and whether more exist.
pub fn completions(f: &CodeTuple, i: usize, w: &BitSeq, k: usize) -> (Vec<SourceSeq>, bool) {
    let m = f.num_tables();
    let depth = (m * (k + 1)).max(m * (w.len() + 1));
    let mut found = Vec::new();
    let mut cut = false;
    let mut queue = VecDeque::from([(i, 0usize, 0usize, SourceSeq::default())]);
    while let Some((j, pos, idle, x)) = queue.pop_front() {
        if x.len() == depth {
            continue;
        }
        let rest = &w.bits()[pos..];
        for s in f.symbols() {
            let c = f.codeword(j, s).bits();
            if !rest.starts_with(c) {
                continue;
            }
            let mut y = x.clone();
            y.push(s);
            if !c.is_empty() && c.len() == rest.len() {
                if found.len() == MAX_COMPLETIONS {
                    return (found, true);
                }
                found.push(y.clone());
            }
            if c.is_empty() {
                if idle == m {
                    cut = true;
                } else {
                    queue.push_back((f.next(j, s), pos, idle + 1, y));
                }
            } else if c.len() < rest.len() {
                queue.push_back((f.next(j, s), pos + c.len(), 0, y));
            }
        }
    }
    (found, cut)
}

/// Decodes `bits` read from table `start` with `k` bits of lookahead.
pub fn decode(f: &CodeTuple, start: usize, bits: &BitSeq, k: usize) -> Result<Decoded> {
    let mut dec = Decoder::new(f, start, k)?;
    for b in bits.iter() {
        dec.push_bit(b);
    }
    dec.finish()
}

/// One failed round trip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripFailure {
    pub start: usize,
    pub input: SourceSeq,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    pub k: usize,
    pub trials: usize,
    pub max_delay: usize,
    pub ambiguous_tails: usize,
    pub failures: Vec<RoundtripFailure>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for RoundtripReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trials = {}", self.trials)?;
        writeln!(f, "k = {}", self.k)?;
        writeln!(f, "max_delay = {}", self.max_delay)?;
        writeln!(f, "ambiguous_tails = {}", self.ambiguous_tails)?;
        write!(f, "failures = {}", self.failures.len())
    }
}

/// Drops trailing symbols whose codewords are empty when read from `start`.
fn trim_silent_tail(f: &CodeTuple, start: usize, x: &[Symbol]) -> SourceSeq {
    let mut tables = Vec::with_capacity(x.len());
    let mut t = start;
    for &s in x {
        tables.push(t);
        t = f.next(t, s);
    }
    let mut end = x.len();
    while end > 0 && f.codeword(tables[end - 1], x[end - 1]).is_empty() {
        end -= 1;
    }
    SourceSeq::new(x[..end].to_vec())
}

/// Checks one encode/decode round trip; `Err` carries the reason.
fn check_one(f: &CodeTuple, start: usize, x: &SourceSeq, k: usize) -> std::result::Result<Decoded, String> {
    let bits = encode(f, start, x).map_err(|e| e.to_string())?;
    let out = decode(f, start, &bits, k).map_err(|e| e.to_string())?;
    let got = out.symbols.symbols();
    if got.len() > x.len() || got != &x.symbols()[..got.len()] {
        let shown = f.alphabet().format_seq(&out.symbols);
        return Err(format!("decoded {shown} is not a prefix of the input"));
    }
    if out.max_delay() > k {
        return Err(format!("delay {} exceeds {k}", out.max_delay()));
    }
    let rest = &x.symbols()[got.len()..];
    let resume = prefix_sets::f_star(f, start, &SourceSeq::new(got.to_vec())).1;
    let rest = trim_silent_tail(f, resume, rest);
    let listed = if rest.is_empty() {
        out.tail.window.is_empty()
    } else {
        out.tail.completions.contains(&rest) || out.tail.truncated
    };
    if !listed {
        let shown = f.alphabet().format_seq(&rest);
        return Err(format!("unmatched input {shown} is not among the tail completions"));
    }
    Ok(out)
}

/// Encodes and decodes `trials` random sequences of length at most `max_len`
/// from random start tables, with a seeded generator.
pub fn roundtrip_check(
    f: &CodeTuple,
    k: usize,
    trials: usize,
    max_len: usize,
    seed: u64,
) -> RoundtripReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RoundtripReport {
        k,
        trials,
        max_delay: 0,
        ambiguous_tails: 0,
        failures: Vec::new(),
    };
    for _ in 0..trials {
        let start = rng.gen_range(0..f.num_tables());
        let len = rng.gen_range(0..=max_len);
        let x: SourceSeq = (0..len).map(|_| Symbol(rng.gen_range(0..f.sigma()))).collect();
        match check_one(f, start, &x, k) {
            Ok(out) => {
                report.max_delay = report.max_delay.max(out.max_delay());
                report.ambiguous_tails += usize::from(!out.tail.is_resolved());
            }
            Err(reason) => report.failures.push(RoundtripFailure {
                start,
                input: x,
                reason,
            }),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goldens;

    fn seq(f: &CodeTuple, text: &str) -> SourceSeq {
        f.alphabet().parse_seq(text).unwrap()
    }

    fn b(s: &str) -> BitSeq {
        s.parse().unwrap()
    }

    #[test]
    fn encodes_the_worked_example() {
        let g = goldens::tuple("gamma");
        assert_eq!(encode(&g, 0, &seq(&g, "badb")).unwrap(), b("1000001111110"));
        assert_eq!(prefix_sets::f_star(&g, 0, &seq(&g, "badb")).1, 0);
        assert_eq!(encode(&g, 1, &SourceSeq::default()).unwrap(), BitSeq::empty());
        assert_eq!(
            encode(&g, 0, &seq(&g, "bc")).unwrap(),
            encode(&g, 0, &seq(&g, "bd")).unwrap()
        );
        assert!(matches!(encode(&g, 3, &seq(&g, "a")), Err(Error::TableOutOfRange { .. })));
    }

    #[test]
    fn decodes_the_worked_example() {
        let g = goldens::tuple("gamma");
        let out = decode(&g, 0, &b("1000001111110"), 2).unwrap();
        assert_eq!(out.symbols, seq(&g, "badb"));
        assert!(out.tail.is_empty() && out.tail.is_resolved());
        assert_eq!(out.conflicts, 0);
        assert!(out.max_delay() <= 2);
    }

    #[test]
    fn shared_encoding_leaves_an_ambiguous_tail() {
        let g = goldens::tuple("gamma");
        let out = decode(&g, 0, &b("1000111"), 2).unwrap();
        assert_eq!(out.symbols, seq(&g, "b"));
        assert_eq!(out.tail.window, b("00111"));
        assert_eq!(out.tail.completions, vec![seq(&g, "c"), seq(&g, "d")]);
        assert!(!out.tail.is_resolved());
    }

    #[test]
    fn empty_input_and_bad_input() {
        let g = goldens::tuple("gamma");
        let out = decode(&g, 0, &BitSeq::empty(), 2).unwrap();
        assert!(out.symbols.is_empty() && out.tail.is_empty());
        // Table 2 never starts with 0.
        assert!(matches!(
            decode(&g, 2, &b("0"), 2),
            Err(Error::NoConsistentCompletion { table: 2, consumed: 0 })
        ));
    }

    #[test]
    fn decoding_is_deterministic() {
        let g = goldens::tuple("gamma");
        let bits = encode(&g, 0, &seq(&g, "abcdabcd")).unwrap();
        assert_eq!(decode(&g, 0, &bits, 2).unwrap(), decode(&g, 0, &bits, 2).unwrap());
    }

    #[test]
    fn round_trips() {
        let r = roundtrip_check(&goldens::tuple("gamma"), 2, 1000, 50, 7);
        assert!(r.passed(), "{:?}", r.failures.first());
        assert!(r.max_delay <= 2);
        assert!(roundtrip_check(&goldens::tuple("kappa"), 2, 300, 30, 1).passed());
        assert!(!roundtrip_check(&goldens::tuple("beta"), 2, 300, 30, 1).passed());
    }
}
