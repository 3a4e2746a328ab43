//! Bounded exhaustive search for code-tuples of minimum average length within
//! `F_0` or `F_AIFV`, and the Huffman baseline.
//!
//! A tuple with `m` tables assigns every `(table, symbol)` slot a codeword of
//! length at most `max_len` and a next table, so the space for fixed `m` has
//! `(W·m)^(σ·m)` members with `W = 2^(max_len+1) − 1`. The search covers
//! `m = 1 ..= max_tables`. For two tables the average length is
//! `(q_1·L_0 + q_0·L_1) / (q_0 + q_1)`, where `q_0` is the weight of leaving
//! table 0 and `q_1` of leaving table 1, so for a fixed pair of next-table
//! patterns the tables can be scanned in order of their own lengths and cut
//! off once no remaining pair can beat the best found.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::alphabet::Alphabet;
use crate::bits::BitSeq;
use crate::classes::{self, Class};
use crate::dist::SourceDist;
use crate::error::{Error, Result};
use crate::markov;
use crate::tuple::CodeTuple;

pub const DEFAULT_MAX_SIGMA: usize = 3;
pub const DEFAULT_MAX_TABLES: usize = 2;
pub const DEFAULT_MAX_LEN: usize = 4;

/// Hard limits of the fast evaluator, even when large spaces are allowed.
const HARD_MAX_SIGMA: usize = 6;
const HARD_MAX_LEN: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Filter {
    F0,
    Aifv,
}

impl Filter {
    pub fn class(self) -> Class {
        match self {
            Filter::F0 => Class::F0,
            Filter::Aifv => Class::Aifv,
        }
    }

    pub fn name(self) -> &'static str {
        self.class().name()
    }
}

impl FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f0" | "f_0" => Ok(Filter::F0),
            "aifv" | "f_aifv" => Ok(Filter::Aifv),
            _ => Err(format!("unknown filter {s:?}; expected f0 or aifv")),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    pub sigma: usize,
    pub max_tables: usize,
    pub max_len: usize,
    pub filter: Filter,
    /// Permit bounds past the defaults.
    pub allow_large: bool,
}

impl SearchSpace {
    pub fn new(sigma: usize, max_tables: usize, max_len: usize, filter: Filter) -> Self {
        SearchSpace {
            sigma,
            max_tables,
            max_len,
            filter,
            allow_large: false,
        }
    }

    pub fn allowing_large(mut self) -> Self {
        self.allow_large = true;
        self
    }

    /// Codeword choices per slot: every bit string of length `0 ..= max_len`.
    pub fn codeword_choices(&self) -> usize {
        (1usize << (self.max_len + 1)) - 1
    }

    /// Number of tuples with exactly `m` tables.
    pub fn size_with_tables(&self, m: usize) -> Option<u128> {
        let per_slot = (self.codeword_choices() as u128).checked_mul(m as u128)?;
        per_slot.checked_pow(u32::try_from(self.sigma * m).ok()?)
    }

    /// `Σ_m (W·m)^(σ·m)` over `m = 1 ..= max_tables`.
    pub fn size(&self) -> Option<u128> {
        (1..=self.max_tables).try_fold(0u128, |acc, m| acc.checked_add(self.size_with_tables(m)?))
    }

    /// A note when the bounds exceed the defaults.
    pub fn cost_warning(&self) -> Option<String> {
        let over = self.sigma > DEFAULT_MAX_SIGMA || self.max_len > DEFAULT_MAX_LEN;
        over.then(|| {
            format!(
                "bounds exceed the defaults (sigma <= {DEFAULT_MAX_SIGMA}, max_len <= {DEFAULT_MAX_LEN}); the search may take very long"
            )
        })
    }

    pub fn validate(&self) -> Result<()> {
        let too_large = |msg: String| Err(Error::SpaceTooLarge(msg));
        if self.sigma < 2 {
            return too_large(format!("alphabet size {} is below 2", self.sigma));
        }
        if self.max_tables == 0 || self.max_tables > DEFAULT_MAX_TABLES {
            return too_large(format!(
                "table count must be 1 or {DEFAULT_MAX_TABLES}, got {}",
                self.max_tables
            ));
        }
        if self.sigma > HARD_MAX_SIGMA || self.max_len > HARD_MAX_LEN {
            return too_large(format!(
                "sigma {} / max_len {} exceed the evaluator limits {HARD_MAX_SIGMA} / {HARD_MAX_LEN}",
                self.sigma, self.max_len
            ));
        }
        if self.cost_warning().is_some() && !self.allow_large {
            return too_large(format!(
                "sigma {} / max_len {} exceed the defaults {DEFAULT_MAX_SIGMA} / {DEFAULT_MAX_LEN}; allow large spaces to proceed",
                self.sigma, self.max_len
            ));
        }
        if self.size().is_none() {
            return too_large("size overflows 128 bits".into());
        }
        Ok(())
    }
}

/// Outcome of [`enumerate_min`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub space: SearchSpace,
    pub best: CodeTuple,
    pub length: BigRational,
    /// Tuples accounted for; equals `space.size()`.
    pub examined: u128,
    /// Tuples tested for class membership.
    pub checked: u128,
    /// Tuples excluded without a length comparison: irregular next-table
    /// patterns and tables failing a per-table condition of the filter.
    pub excluded: u128,
    /// Tuples skipped because their length cannot beat the best found.
    pub bounded: u128,
}

impl fmt::Display for SearchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.best)?;
        writeln!(f, "filter = {}", self.space.filter)?;
        writeln!(f, "sigma = {}", self.space.sigma)?;
        writeln!(f, "max_tables = {}", self.space.max_tables)?;
        writeln!(f, "max_len = {}", self.space.max_len)?;
        writeln!(f, "L = {}", self.length)?;
        writeln!(f, "L_decimal = {}", markov::round_half_even(&self.length, 6))?;
        writeln!(f, "space_size = {}", self.space.size().unwrap_or(0))?;
        writeln!(f, "examined = {}", self.examined)?;
        writeln!(f, "checked = {}", self.checked)?;
        writeln!(f, "excluded = {}", self.excluded)?;
        write!(f, "bounded = {}", self.bounded)
    }
}

/// A codeword as `(length, value)`, most significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Word {
    len: u8,
    val: u16,
}

impl Word {
    fn bit(self, at: u8) -> u8 {
        ((self.val >> (self.len - 1 - at)) & 1) as u8
    }

    /// Bits `at .. at + n` as an integer.
    fn slice(self, at: u8, n: u8) -> u8 {
        ((self.val >> (self.len - at - n)) & ((1 << n) - 1)) as u8
    }

    fn is_strict_prefix_of(self, other: Word) -> bool {
        self.len < other.len && other.val >> (other.len - self.len) == self.val
    }

    fn to_bits(self) -> BitSeq {
        BitSeq::from_u64(u64::from(self.val), self.len as usize)
    }
}

/// All words up to `max_len` bits, length first, then lexicographic.
fn words(max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(|len| {
            (0..1u32 << len).map(move |val| Word {
                len: len as u8,
                val: val as u16,
            })
        })
        .collect()
}

/// One table: a codeword and a next table per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Table {
    words: Vec<Word>,
    /// Index of each codeword in the word list.
    word_index: Vec<usize>,
    next: Vec<u8>,
    /// `Σ_s w_s |f(s)|` in integer weights.
    weighted_len: u128,
    /// Position in the canonical enumeration of single tables.
    rank: u64,
}

/// Every table for `m` tables, in canonical order: slots by symbol, each slot
/// ordered by codeword and then next table.
fn all_tables(all_words: &[Word], sigma: usize, m: usize, weights: &[u128]) -> Vec<Table> {
    let per_slot = all_words.len() * m;
    let total = per_slot.pow(sigma as u32);
    (0..total)
        .map(|rank| {
            let mut digits = vec![0usize; sigma];
            let mut r = rank;
            for d in digits.iter_mut().rev() {
                *d = r % per_slot;
                r /= per_slot;
            }
            let word_index: Vec<usize> = digits.iter().map(|d| d / m).collect();
            let words: Vec<Word> = word_index.iter().map(|&w| all_words[w]).collect();
            let next = digits.iter().map(|d| (d % m) as u8).collect();
            let weighted_len = words
                .iter()
                .zip(weights)
                .map(|(w, &q)| q * u128::from(w.len))
                .sum();
            Table {
                words,
                word_index,
                next,
                weighted_len,
                rank: rank as u64,
            }
        })
        .collect()
}

/// Bit masks over strings of length one (bit `b`) and two (bit `2·b0 + b1`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Masks {
    p1: u8,
    p2: u8,
}

/// `P^1` and `P^2` for every table, by fixed-point iteration.
fn prefix_masks(tables: &[&Table]) -> Vec<Masks> {
    let m = tables.len();
    let mut p1 = vec![0u8; m];
    loop {
        let mut changed = false;
        for (j, t) in tables.iter().enumerate() {
            let mut mask = p1[j];
            for (w, &n) in t.words.iter().zip(&t.next) {
                mask |= if w.len == 0 { p1[n as usize] } else { 1 << w.bit(0) };
            }
            changed |= mask != p1[j];
            p1[j] = mask;
        }
        if !changed {
            break;
        }
    }
    let mut p2 = vec![0u8; m];
    loop {
        let mut changed = false;
        for (j, t) in tables.iter().enumerate() {
            let mut mask = p2[j];
            for (w, &n) in t.words.iter().zip(&t.next) {
                mask |= match w.len {
                    0 => p2[n as usize],
                    1 => extend_one(w.bit(0), p1[n as usize]),
                    _ => 1 << w.slice(0, 2),
                };
            }
            changed |= mask != p2[j];
            p2[j] = mask;
        }
        if !changed {
            break;
        }
    }
    p1.into_iter()
        .zip(p2)
        .map(|(p1, p2)| Masks { p1, p2 })
        .collect()
}

/// `b` followed by each one-bit string in `p1`, as a two-bit mask.
fn extend_one(b: u8, p1: u8) -> u8 {
    let mut out = 0;
    for c in 0..2 {
        if p1 & (1 << c) != 0 {
            out |= 1 << (2 * b + c);
        }
    }
    out
}

/// `P̄^2_i(w)`: two bits that can follow `w` inside a longer codeword.
fn strict_two(t: &Table, w: Word, masks: &[Masks]) -> u8 {
    let mut out = 0;
    for (&v, &n) in t.words.iter().zip(&t.next) {
        if !w.is_strict_prefix_of(v) {
            continue;
        }
        out |= if v.len - w.len >= 2 {
            1 << v.slice(w.len, 2)
        } else {
            extend_one(v.bit(w.len), masks[n as usize].p1)
        };
    }
    out
}

/// Extendable, regular and 2-bit delay decodable.
fn in_f0(tables: &[&Table]) -> bool {
    let masks = prefix_masks(tables);
    if masks.iter().any(|m| m.p1 == 0) || !regular(tables) {
        return false;
    }
    for t in tables {
        for (s, (&w, &n)) in t.words.iter().zip(&t.next).enumerate() {
            if masks[n as usize].p2 & strict_two(t, w, &masks) != 0 {
                return false;
            }
            for (&v, &o) in t.words[s + 1..].iter().zip(&t.next[s + 1..]) {
                if v == w && masks[n as usize].p2 & masks[o as usize].p2 != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Some table is reachable from every table.
fn regular(tables: &[&Table]) -> bool {
    let m = tables.len();
    let reach: Vec<u32> = (0..m)
        .map(|start| {
            let mut seen = 1u32 << start;
            let mut stack = vec![start];
            while let Some(j) = stack.pop() {
                for &n in &tables[j].next {
                    if seen & (1 << n) == 0 {
                        seen |= 1 << n;
                        stack.push(n as usize);
                    }
                }
            }
            seen
        })
        .collect();
    reach.iter().fold(u32::MAX, |acc, &r| acc & r) != 0
}

/// `P̄^1_i(b)` restricted to one table: first bits after `b` in longer codewords.
fn strict_one(t: &Table, b: Word) -> u8 {
    t.words
        .iter()
        .filter(|&&v| b.is_strict_prefix_of(v))
        .fold(0, |acc, &v| acc | 1 << v.bit(b.len))
}

fn append(w: Word, bit: u8) -> Word {
    Word {
        len: w.len + 1,
        val: (w.val << 1) | u16::from(bit),
    }
}

/// The AIFV conditions that concern a single table in position `role`. With
/// two tables every condition is of this kind, so a pair of tables is an AIFV
/// code-tuple exactly when both pass.
fn aifv_table_ok(t: &Table, role: usize) -> bool {
    let words = &t.words;
    let zero = Word { len: 1, val: 0 };
    for (s, &w) in words.iter().enumerate() {
        if words[s + 1..].contains(&w) {
            return false;
        }
    }
    for &w in words {
        if strict_one(t, w) & 0b10 != 0 || strict_one(t, append(w, 0)) & 0b10 != 0 {
            return false;
        }
        if words.contains(&append(w, 0)) {
            return false;
        }
    }
    for (&w, &n) in words.iter().zip(&t.next) {
        let inner = words.iter().any(|&v| w.is_strict_prefix_of(v));
        if n != u8::from(inner) {
            return false;
        }
    }
    if role == 1 {
        if words.iter().any(|&w| w.len == 0 || w == zero) {
            return false;
        }
        if strict_one(t, zero) & 0b01 != 0 {
            return false;
        }
    }
    let mut prefixes: Vec<Word> = words
        .iter()
        .flat_map(|&w| {
            (0..w.len).map(move |n| Word {
                len: n,
                val: if n == 0 { 0 } else { w.val >> (w.len - n) },
            })
        })
        .collect();
    prefixes.sort_by_key(|w| (w.len, w.val));
    prefixes.dedup();
    for b in prefixes {
        if strict_one(t, b).count_ones() != 1 || (role == 1 && b == zero) {
            continue;
        }
        let near = words
            .iter()
            .any(|&w| w == b || (w.len + 1 == b.len && w.is_strict_prefix_of(b)));
        if !near {
            return false;
        }
    }
    true
}

/// Best so far: length `num / den` and the canonical key `(m, ranks)`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Best {
    num: u128,
    den: u128,
    key: (usize, u64, u64),
    tables: Vec<Table>,
}

fn cmp_len(num: u128, den: u128, other_num: u128, other_den: u128) -> Ordering {
    (num * other_den).cmp(&(other_num * den))
}

impl Best {
    fn beats(&self, other: &Best) -> bool {
        match cmp_len(self.num, self.den, other.num, other.den) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.key < other.key,
        }
    }
}

#[derive(Debug, Default)]
struct Tally {
    best: Option<Best>,
    checked: u128,
    excluded: u128,
    bounded: u128,
}

impl Tally {
    fn offer(&mut self, candidate: Best) {
        if self.best.as_ref().is_none_or(|b| candidate.beats(b)) {
            self.best = Some(candidate);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.excluded += other.excluded;
        self.bounded += other.bounded;
        if let Some(b) = other.best {
            self.offer(b);
        }
        self
    }
}

/// Integer weights that fit the fast evaluator.
fn small_weights(mu: &SourceDist) -> Result<(u128, Vec<u128>)> {
    let (d, w) = mu.integer_weights();
    let limit = BigInt::from(1u64 << 48);
    if d > limit {
        return Err(Error::SpaceTooLarge(format!(
            "distribution denominator {d} exceeds 2^48"
        )));
    }
    let conv = |x: &BigInt| x.to_u128().expect("positive and below the limit");
    Ok((conv(&d), w.iter().map(conv).collect()))
}

fn search_one_table(
    tables: &[Table],
    filter: Filter,
    denom: u128,
    partition: usize,
) -> Tally {
    let mut tally = Tally::default();
    for t in tables.iter().filter(|t| t.word_index[0] == partition) {
        if filter == Filter::Aifv {
            tally.excluded += 1;
            continue;
        }
        tally.checked += 1;
        if in_f0(&[t]) {
            tally.offer(Best {
                num: t.weighted_len,
                den: denom,
                key: (1, t.rank, 0),
                tables: vec![t.clone()],
            });
        }
    }
    tally
}

/// Tables grouped by next-table pattern, ordered by weighted length and then rank.
struct Groups {
    by_pattern: Vec<Vec<Table>>,
}

impl Groups {
    fn new(tables: Vec<Table>, sigma: usize, keep: impl Fn(&Table) -> bool) -> (Groups, Vec<usize>) {
        let mut by_pattern = vec![Vec::new(); 1 << sigma];
        let mut totals = vec![0usize; 1 << sigma];
        for t in tables {
            let p = pattern(&t);
            totals[p] += 1;
            if keep(&t) {
                by_pattern[p].push(t);
            }
        }
        for g in &mut by_pattern {
            g.sort_by_key(|t| (t.weighted_len, t.rank));
        }
        (Groups { by_pattern }, totals)
    }
}

/// Bit `s` is set when symbol `s` moves to table 1.
fn pattern(t: &Table) -> usize {
    t.next
        .iter()
        .enumerate()
        .fold(0, |acc, (s, &n)| acc | (usize::from(n) << s))
}

struct TwoTableInput<'a> {
    first: &'a Groups,
    first_totals: &'a [usize],
    second: &'a Groups,
    second_totals: &'a [usize],
    weights: &'a [u128],
    denom: u128,
    filter: Filter,
    /// Number of codeword choices, which is also the number of partitions.
    words: usize,
}

/// All two-table tuples whose first table's first codeword is `partition`.
fn search_two_tables(input: &TwoTableInput<'_>, partition: usize, seed: Option<Best>) -> Tally {
    let mut tally = Tally {
        best: seed,
        ..Tally::default()
    };
    let sigma = input.weights.len();
    for p0 in 0..1usize << sigma {
        let rows: Vec<&Table> = input.first.by_pattern[p0]
            .iter()
            .filter(|t| t.word_index[0] == partition)
            .collect();
        // Every first codeword occurs equally often within a pattern.
        let dropped_rows = input.first_totals[p0] / input.words - rows.len();
        for p1 in 0..1usize << sigma {
            let cols = &input.second.by_pattern[p1];
            let col_total = input.second_totals[p1] as u128;
            tally.excluded += dropped_rows as u128 * col_total;
            tally.excluded += rows.len() as u128 * (col_total - cols.len() as u128);
            let q0: u128 = (0..sigma).filter(|s| p0 >> s & 1 == 1).map(|s| input.weights[s]).sum();
            let q1: u128 = (0..sigma).filter(|s| p1 >> s & 1 == 0).map(|s| input.weights[s]).sum();
            if q0 + q1 == 0 {
                tally.excluded += (rows.len() * cols.len()) as u128;
                continue;
            }
            let den = (q0 + q1) * input.denom;
            // With q0 = 0 the second table does not affect the length, so it
            // is scanned in rank order to meet ties in canonical order.
            let mut by_rank;
            let cols: &[Table] = if q0 == 0 {
                by_rank = cols.clone();
                by_rank.sort_by_key(|t| t.rank);
                &by_rank
            } else {
                cols
            };
            let min_col = cols.iter().map(|t| t.weighted_len).min();
            let Some(min_col) = min_col else { continue };
            for (ri, a) in rows.iter().enumerate() {
                let lower = q1 * a.weighted_len + q0 * min_col;
                if let Some(b) = &tally.best {
                    if cmp_len(lower, den, b.num, b.den) == Ordering::Greater {
                        tally.bounded += ((rows.len() - ri) * cols.len()) as u128;
                        break;
                    }
                }
                for (ci, c) in cols.iter().enumerate() {
                    let num = q1 * a.weighted_len + q0 * c.weighted_len;
                    let key = (2, a.rank, c.rank);
                    if let Some(b) = &tally.best {
                        let ord = cmp_len(num, den, b.num, b.den);
                        if ord == Ordering::Greater || (ord == Ordering::Equal && key > b.key) {
                            tally.bounded += (cols.len() - ci) as u128;
                            break;
                        }
                    }
                    tally.checked += 1;
                    let member = match input.filter {
                        Filter::F0 => in_f0(&[a, c]),
                        Filter::Aifv => regular(&[a, c]),
                    };
                    if member {
                        tally.offer(Best {
                            num,
                            den,
                            key,
                            tables: vec![(*a).clone(), c.clone()],
                        });
                        tally.bounded += (cols.len() - ci - 1) as u128;
                        break;
                    }
                }
            }
        }
    }
    tally
}

fn build_tuple(alphabet: &Arc<Alphabet>, tables: &[Table]) -> CodeTuple {
    let codewords = tables
        .iter()
        .map(|t| t.words.iter().map(|w| w.to_bits()).collect())
        .collect();
    let next = tables
        .iter()
        .map(|t| t.next.iter().map(|&n| n as usize).collect())
        .collect();
    CodeTuple::new(alphabet.clone(), codewords, next).expect("search builds valid tuples")
}

/// Minimum average length over the space, ties broken by canonical order.
/// The winner is re-checked with the general classifier and the exact
/// stationary solver before it is returned.
pub fn enumerate_min(space: &SearchSpace, mu: &SourceDist) -> Result<SearchResult> {
    space.validate()?;
    if mu.len() != space.sigma {
        return Err(Error::AlphabetMismatch {
            tuple: space.sigma,
            dist: mu.len(),
        });
    }
    let alphabet = Arc::new(
        mu.names()
            .cloned()
            .unwrap_or_else(|| Alphabet::letters(space.sigma)),
    );
    let (denom, weights) = small_weights(mu)?;
    let all_words = words(space.max_len);
    let w = all_words.len();

    let one = all_tables(&all_words, space.sigma, 1, &weights);
    let mut tally = (0..w)
        .into_par_iter()
        .map(|p| search_one_table(&one, space.filter, denom, p))
        .reduce(Tally::default, Tally::merge);

    if space.max_tables == 2 {
        let two = all_tables(&all_words, space.sigma, 2, &weights);
        let filter = space.filter;
        let (first, first_totals) = Groups::new(two.clone(), space.sigma, |t| {
            filter == Filter::F0 || aifv_table_ok(t, 0)
        });
        let (second, second_totals) = Groups::new(two, space.sigma, |t| {
            filter == Filter::F0 || aifv_table_ok(t, 1)
        });
        let input = TwoTableInput {
            first: &first,
            first_totals: &first_totals,
            second: &second,
            second_totals: &second_totals,
            weights: &weights,
            denom,
            filter,
            words: w,
        };
        let seed = tally.best.clone();
        let two_tally = (0..w)
            .into_par_iter()
            .map(|p| search_two_tables(&input, p, seed.clone()))
            .reduce(Tally::default, Tally::merge);
        tally = tally.merge(two_tally);
    }

    let examined = tally.checked + tally.excluded + tally.bounded;
    let best = tally.best.ok_or_else(|| Error::EmptySpace {
        filter: space.filter.name().to_string(),
    })?;
    let tuple = build_tuple(&alphabet, &best.tables);
    let length = BigRational::new(BigInt::from(best.num), BigInt::from(best.den));
    let report = classes::classify(&tuple, mu)?;
    assert!(
        report.holds(space.filter.class()),
        "search winner fails {}: {:?}",
        space.filter,
        report.reason(space.filter.class())
    );
    assert_eq!(markov::average_length(&tuple, mu)?, length, "search length disagrees with the solver");
    Ok(SearchResult {
        space: space.clone(),
        best: tuple,
        length,
        examined,
        checked: tally.checked,
        excluded: tally.excluded,
        bounded: tally.bounded,
    })
}

/// Codeword lengths per symbol and the exact average length of a Huffman code.
/// Merges the two lightest nodes, lighter first; equal weights go to the node
/// holding the smallest symbol index.
pub fn huffman_length(mu: &SourceDist) -> (Vec<usize>, BigRational) {
    let probs = mu.probs();
    let n = probs.len();
    let mut lengths = vec![0usize; n];
    let mut members: Vec<Vec<usize>> = (0..n).map(|s| vec![s]).collect();
    let mut heap: BinaryHeap<Reverse<(BigRational, usize, usize)>> = probs
        .iter()
        .enumerate()
        .map(|(s, p)| Reverse((p.clone(), s, s)))
        .collect();
    while heap.len() > 1 {
        let Reverse((p, low_a, a)) = heap.pop().expect("two nodes");
        let Reverse((q, low_b, b)) = heap.pop().expect("two nodes");
        let mut merged = std::mem::take(&mut members[a]);
        merged.append(&mut std::mem::take(&mut members[b]));
        for &s in &merged {
            lengths[s] += 1;
        }
        members.push(merged);
        heap.push(Reverse((p + q, low_a.min(low_b), members.len() - 1)));
    }
    let length = probs
        .iter()
        .zip(&lengths)
        .map(|(p, &l)| p * BigRational::from_integer(BigInt::from(l)))
        .sum();
    (lengths, length)
}

/// Best AIFV length against the Huffman length for one distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub huffman_lengths: Vec<usize>,
    pub huffman: BigRational,
    /// `None` when no AIFV code-tuple fits the bounds.
    pub aifv: Option<SearchResult>,
    pub note: Option<String>,
}

impl Comparison {
    /// `Huffman − AIFV`, when both exist.
    pub fn gap(&self) -> Option<BigRational> {
        self.aifv.as_ref().map(|r| &self.huffman - &r.length)
    }

    /// AIFV is no longer than Huffman, or the bounds admit no AIFV tuple.
    pub fn aifv_not_worse(&self) -> bool {
        self.gap().is_none_or(|g| g >= BigRational::zero())
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lens: Vec<String> = self.huffman_lengths.iter().map(|l| l.to_string()).collect();
        writeln!(f, "huffman_lengths = {}", lens.join(" "))?;
        writeln!(f, "huffman_L = {}", self.huffman)?;
        match &self.aifv {
            Some(r) => {
                writeln!(f, "aifv_L = {}", r.length)?;
                writeln!(f, "gap = {}", self.gap().expect("aifv present"))?;
            }
            None => writeln!(f, "aifv_L = none")?,
        }
        if let Some(note) = &self.note {
            writeln!(f, "note = {note}")?;
        }
        Ok(())
    }
}

/// Runs the AIFV-filtered search and the Huffman construction side by side.
pub fn compare_aifv_huffman(mu: &SourceDist, space: &SearchSpace) -> Result<Comparison> {
    let (huffman_lengths, huffman) = huffman_length(mu);
    let space = SearchSpace {
        filter: Filter::Aifv,
        ..space.clone()
    };
    let (aifv, note) = match enumerate_min(&space, mu) {
        Ok(r) => {
            let note = (r.length > huffman).then(|| {
                "the bounds admit no AIFV code-tuple as short as the Huffman code".to_string()
            });
            (Some(r), note)
        }
        Err(Error::EmptySpace { .. }) => (
            None,
            Some("no AIFV code-tuple fits the bounds (AIFV code-tuples have two tables)".into()),
        ),
        Err(e) => return Err(e),
    };
    Ok(Comparison {
        huffman_lengths,
        huffman,
        aifv,
        note,
    })
}

/// Per-table AIFV conditions on table `i` of `f`, for oracle tests.
#[doc(hidden)]
pub fn aifv_table_condition(f: &CodeTuple, i: usize) -> bool {
    let weights = vec![1u128; f.sigma()];
    aifv_table_ok(&Table::from_tuple_table(f, i, &weights), i)
}

/// The fast `F_0` membership test, for oracle tests.
#[doc(hidden)]
pub fn fast_in_f0(f: &CodeTuple) -> bool {
    let weights = vec![1u128; f.sigma()];
    let tables: Vec<Table> = f.tables().map(|i| Table::from_tuple_table(f, i, &weights)).collect();
    let refs: Vec<&Table> = tables.iter().collect();
    in_f0(&refs)
}

impl Table {
    fn from_tuple_table(f: &CodeTuple, i: usize, weights: &[u128]) -> Table {
        let words: Vec<Word> = f
            .table(i)
            .iter()
            .map(|b| Word {
                len: b.len() as u8,
                val: b.iter().fold(0u16, |acc, x| acc << 1 | u16::from(x)),
            })
            .collect();
        Table {
            weighted_len: words.iter().zip(weights).map(|(w, &q)| q * u128::from(w.len)).sum(),
            word_index: vec![0; words.len()],
            words,
            next: f.next_table(i).iter().map(|&n| n as u8).collect(),
            rank: 0,
        }
    }
}
