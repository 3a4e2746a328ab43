//! Helpers shared by the oracle and acceptance suites.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use aifv_core::alphabet::Alphabet;
use aifv_core::analysis;
use aifv_core::bits::BitSeq;
use aifv_core::prefix_sets::{self, PrefixSets};
use aifv_core::CodeTuple;
use proptest::prelude::*;

/// Tuples with 2 or 3 symbols, 1 to 3 tables and codewords of up to 3 bits;
/// roughly one codeword in eight is empty.
pub fn tuples(max_tables: usize) -> impl Strategy<Value = CodeTuple> {
    (2usize..=3, 1usize..=max_tables).prop_flat_map(|(sigma, m)| {
        let word = prop_oneof![
            1 => Just(Vec::new()),
            7 => proptest::collection::vec(any::<bool>(), 1..=3),
        ];
        let slot = (word, 0..m);
        proptest::collection::vec(proptest::collection::vec(slot, sigma), m).prop_map(move |rows| {
            let codewords = rows
                .iter()
                .map(|r| r.iter().map(|(w, _)| BitSeq::from_bits(w.iter().copied())).collect())
                .collect();
            let next = rows.iter().map(|r| r.iter().map(|(_, n)| *n).collect()).collect();
            CodeTuple::new(Arc::new(Alphabet::letters(sigma)), codewords, next).unwrap()
        })
    })
}

/// `P^k_{F,i}(b)` (or the strict variant) by walking source sequences.
/// Runs of empty codewords longer than the table count revisit a table
/// without new output, so they are cut there.
pub fn oracle_set(f: &CodeTuple, i: usize, b: &[bool], k: usize, strict: bool) -> BTreeSet<Vec<bool>> {
    fn walk(
        f: &CodeTuple,
        table: usize,
        out: Vec<bool>,
        need: usize,
        idle: usize,
        found: &mut BTreeSet<Vec<bool>>,
    ) {
        if out.len() >= need {
            found.insert(out[need - need.min(out.len())..].to_vec());
            return;
        }
        if idle > f.num_tables() {
            return;
        }
        for s in f.symbols() {
            let w = f.codeword(table, s);
            let mut next = out.clone();
            next.extend(w.iter());
            let idle = if w.is_empty() { idle + 1 } else { 0 };
            walk(f, f.next(table, s), next, need, idle, found);
        }
    }
    let need = b.len() + k;
    let mut tails = BTreeSet::new();
    for s in f.symbols() {
        let w: Vec<bool> = f.codeword(i, s).iter().collect();
        let extends = w.len() >= b.len() && w[..b.len()] == *b;
        if !extends || (strict && w.len() == b.len()) {
            continue;
        }
        let mut found = BTreeSet::new();
        walk(f, f.next(i, s), w.clone(), need, usize::from(w.is_empty()), &mut found);
        tails.extend(found);
    }
    tails
        .into_iter()
        .filter(|t| t.len() >= need)
        .map(|t| t[b.len()..need].to_vec())
        .collect()
}

pub fn to_vecs(set: &prefix_sets::BitSet) -> BTreeSet<Vec<bool>> {
    set.iter().map(|b| b.bits().to_vec()).collect()
}

/// Codeword prefixes of table `i`, plus each codeword followed by one bit.
pub fn probes(f: &CodeTuple, i: usize) -> BTreeSet<Vec<bool>> {
    let mut out = BTreeSet::new();
    for w in f.table(i) {
        let bits = w.bits();
        for n in 0..=bits.len() {
            out.insert(bits[..n].to_vec());
        }
        for extra in [false, true] {
            let mut v = bits.to_vec();
            v.push(extra);
            out.insert(v);
        }
    }
    out
}

pub fn two_bit_decodable_and_extendable(f: &CodeTuple) -> bool {
    let ps = PrefixSets::new(f);
    analysis::unextendable_table(&ps).is_none() && analysis::decodability(&ps, 2).decodable()
}
