//! Structural predicates: extendability, k-bit delay decodability,
//! reachability, regularity and the two-element prefix-set tables.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::alphabet::{SourceSeq, Symbol};
use crate::bits::BitSeq;
use crate::dist::SourceDist;
use crate::error::Result;
use crate::markov;
use crate::prefix_sets::PrefixSets;
use crate::tuple::CodeTuple;

/// First table whose one-bit prefix set is empty, if any.
pub fn unextendable_table(ps: &PrefixSets<'_>) -> Option<usize> {
    ps.tuple()
        .tables()
        .find(|&i| ps.base(i, 1).is_empty())
}

/// Every table can keep producing output.
pub fn is_extendable(f: &CodeTuple) -> bool {
    unextendable_table(&PrefixSets::new(f)).is_none()
}

/// A witness that some lookahead fails to separate the candidate parses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `bits` can follow `f_i(s)` both when `s` was sent and when a longer
    /// codeword of table `i` is in progress.
    Continuation {
        table: usize,
        symbol: Symbol,
        bits: BitSeq,
    },
    /// `first` and `second` share a codeword and `bits` can follow either.
    SharedCodeword {
        table: usize,
        first: Symbol,
        second: Symbol,
        bits: BitSeq,
    },
}

impl Violation {
    pub fn describe(&self, f: &CodeTuple) -> String {
        let name = |s: &Symbol| f.alphabet().name(*s).to_string();
        match self {
            Violation::Continuation { table, symbol, bits } => format!(
                "table {table}, symbol {}: {bits} follows both the codeword {} and a longer codeword",
                name(symbol),
                f.codeword(*table, *symbol)
            ),
            Violation::SharedCodeword {
                table,
                first,
                second,
                bits,
            } => format!(
                "table {table}, symbols {} and {} share codeword {} and both allow {bits} next",
                name(first),
                name(second),
                f.codeword(*table, *first)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodabilityReport {
    pub k: usize,
    pub violations: Vec<Violation>,
}

impl DecodabilityReport {
    pub fn decodable(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both disjointness conditions and collects every offending string.
pub fn decodability(ps: &PrefixSets<'_>, k: usize) -> DecodabilityReport {
    let f = ps.tuple();
    let mut violations = Vec::new();
    for i in f.tables() {
        for s in f.symbols() {
            let after = ps.base(f.next(i, s), k);
            let longer = ps.p_bar_set(i, f.codeword(i, s), k);
            for bits in after.intersection(&longer) {
                violations.push(Violation::Continuation {
                    table: i,
                    symbol: s,
                    bits: bits.clone(),
                });
            }
        }
        let mut by_codeword: BTreeMap<&BitSeq, Vec<Symbol>> = BTreeMap::new();
        for s in f.symbols() {
            by_codeword.entry(f.codeword(i, s)).or_default().push(s);
        }
        for group in by_codeword.values().filter(|g| g.len() > 1) {
            for (a, &first) in group.iter().enumerate() {
                for &second in &group[a + 1..] {
                    let x = ps.base(f.next(i, first), k);
                    let y = ps.base(f.next(i, second), k);
                    for bits in x.intersection(&y) {
                        violations.push(Violation::SharedCodeword {
                            table: i,
                            first,
                            second,
                            bits: bits.clone(),
                        });
                    }
                }
            }
        }
    }
    DecodabilityReport { k, violations }
}

pub fn is_k_bit_delay_decodable(f: &CodeTuple, k: usize) -> DecodabilityReport {
    decodability(&PrefixSets::new(f), k)
}

/// Tables reachable from every table, with shortest witness sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    pub members: Vec<usize>,
    /// `(from, to) → x` with `τ*_from(x) = to`, for every `to` in `members`.
    pub witnesses: BTreeMap<(usize, usize), SourceSeq>,
}

/// Shortest paths from `start` in the next-table graph; ties go to the
/// earlier symbol, which BFS in symbol order delivers.
fn paths_from(f: &CodeTuple, start: usize) -> Vec<Option<SourceSeq>> {
    let mut paths: Vec<Option<SourceSeq>> = vec![None; f.num_tables()];
    paths[start] = Some(SourceSeq::default());
    let mut queue = VecDeque::from([start]);
    while let Some(j) = queue.pop_front() {
        for s in f.symbols() {
            let t = f.next(j, s);
            if paths[t].is_none() {
                let mut p = paths[j].clone().expect("queued tables have paths");
                p.push(s);
                paths[t] = Some(p);
                queue.push_back(t);
            }
        }
    }
    paths
}

pub fn reachability(f: &CodeTuple) -> Reachability {
    let all: Vec<Vec<Option<SourceSeq>>> = f.tables().map(|j| paths_from(f, j)).collect();
    let members: Vec<usize> = f
        .tables()
        .filter(|&i| all.iter().all(|p| p[i].is_some()))
        .collect();
    let mut witnesses = BTreeMap::new();
    for (j, paths) in all.iter().enumerate() {
        for &i in &members {
            witnesses.insert((j, i), paths[i].clone().expect("member is reachable"));
        }
    }
    Reachability { members, witnesses }
}

/// Whether the stationary equations have a unique solution, decided by the
/// graph criterion `R_F ≠ ∅`. Debug builds also check the rank of the linear
/// system and panic if the two disagree.
pub fn is_regular(f: &CodeTuple, mu: &SourceDist) -> Result<bool> {
    let by_graph = !reachability(f).members.is_empty();
    if cfg!(debug_assertions) {
        let q = markov::transition_matrix(f, mu)?;
        let by_rank = markov::stationary_rank_is_full(&q);
        assert_eq!(
            by_graph, by_rank,
            "graph and rank criteria disagree on regularity of {f:?}"
        );
    }
    Ok(by_graph)
}

/// Regularity from the next-table graph alone.
pub fn is_regular_structure(f: &CodeTuple) -> bool {
    !reachability(f).members.is_empty()
}

/// Tables whose two-bit prefix set has exactly two elements.
pub fn m_set(ps: &PrefixSets<'_>) -> Vec<usize> {
    ps.tuple()
        .tables()
        .filter(|&i| ps.base(i, 2).len() == 2)
        .collect()
}

impl fmt::Display for DecodabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-bit delay decodable: {} ({} violations)",
            self.k,
            self.decodable(),
            self.violations.len()
        )
    }
}
