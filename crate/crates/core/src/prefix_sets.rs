//! The extension maps `f*_i`, `τ*_i` and the prefix sets `P^k_{F,i}(b)`,
//! `P̄^k_{F,i}(b)`, computed exactly.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Mutex;

use crate::alphabet::{SourceSeq, Symbol};
use crate::bits::BitSeq;
use crate::tuple::CodeTuple;

/// A set of equal-length bit sequences, iterated in lexicographic order.
pub type BitSet = BTreeSet<BitSeq>;

/// Default upper bound on the lookahead length `k` a table will materialize.
pub const DEFAULT_K_CAP: usize = 8;

/// `(f*_i(x), τ*_i(x))`.
pub fn f_star(f: &CodeTuple, i: usize, x: &SourceSeq) -> (BitSeq, usize) {
    let mut out = BitSeq::empty();
    let mut table = i;
    for &s in x.iter() {
        out.extend_from(f.codeword(table, s));
        table = f.next(table, s);
    }
    (out, table)
}

/// `S_{F,i}(b)`: symbols whose codeword in table `i` is exactly `b`.
pub fn symbols_with_codeword(f: &CodeTuple, i: usize, b: &BitSeq) -> Vec<Symbol> {
    f.symbols().filter(|&s| f.codeword(i, s) == b).collect()
}

/// Whether `b` is a prefix of some `f*_i(x)`.
///
/// Explores states `(table, bits matched)`; a λ codeword moves between tables
/// without consuming, so states are deduplicated rather than bounded by `|x|`.
pub fn p_star_contains(f: &CodeTuple, i: usize, b: &BitSeq) -> bool {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(i, 0usize)]);
    while let Some((j, pos)) = queue.pop_front() {
        if pos == b.len() {
            return true;
        }
        if !seen.insert((j, pos)) {
            continue;
        }
        let rest = &b.bits()[pos..];
        for s in f.symbols() {
            let w = f.codeword(j, s).bits();
            if w.len() >= rest.len() {
                if w.starts_with(rest) {
                    return true;
                }
            } else if rest.starts_with(w) {
                queue.push_back((f.next(j, s), pos + w.len()));
            }
        }
    }
    false
}

/// Memoized prefix sets for one code-tuple.
///
/// The memo sits behind mutexes, so a table may be shared between threads;
/// concurrent cold reads simply serialize on the lock.
pub struct PrefixSets<'a> {
    tuple: &'a CodeTuple,
    k_cap: usize,
    /// `base[k][j]` is `P^k_{F,j}(λ)`; levels are filled in order on demand.
    base: Mutex<Vec<Vec<BitSet>>>,
    memo: Mutex<HashMap<(usize, BitSeq, usize, bool), BitSet>>,
}

impl<'a> PrefixSets<'a> {
    pub fn new(tuple: &'a CodeTuple) -> Self {
        PrefixSets::with_cap(tuple, DEFAULT_K_CAP)
    }

    pub fn with_cap(tuple: &'a CodeTuple, k_cap: usize) -> Self {
        PrefixSets {
            tuple,
            k_cap,
            base: Mutex::new(Vec::new()),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn tuple(&self) -> &'a CodeTuple {
        self.tuple
    }

    pub fn k_cap(&self) -> usize {
        self.k_cap
    }

    fn check_k(&self, k: usize) {
        assert!(
            k <= self.k_cap,
            "lookahead {k} exceeds the configured cap {}",
            self.k_cap
        );
    }

    /// `P^k_{F,j}(λ)`.
    pub fn base(&self, j: usize, k: usize) -> BitSet {
        self.check_k(k);
        let mut levels = self.base.lock().unwrap();
        while levels.len() <= k {
            let next = self.next_level(&levels);
            levels.push(next);
        }
        levels[k][j].clone()
    }

    /// Least fixed point of the level-`k` equations, given all lower levels.
    fn next_level(&self, lower: &[Vec<BitSet>]) -> Vec<BitSet> {
        let f = self.tuple;
        let k = lower.len();
        let m = f.num_tables();
        if k == 0 {
            return vec![BitSet::from([BitSeq::empty()]); m];
        }
        let mut level = vec![BitSet::new(); m];
        loop {
            let mut changed = false;
            for j in 0..m {
                let mut add = Vec::new();
                for s in f.symbols() {
                    let w = f.codeword(j, s);
                    let t = f.next(j, s);
                    if w.len() >= k {
                        add.push(w.take(k));
                    } else if w.is_empty() {
                        add.extend(level[t].iter().cloned());
                    } else {
                        add.extend(lower[k - w.len()][t].iter().map(|c| w.concat(c)));
                    }
                }
                for c in add {
                    changed |= level[j].insert(c);
                }
            }
            if !changed {
                return level;
            }
        }
    }

    /// `P^k_{F,i}(b)`.
    pub fn p_set(&self, i: usize, b: &BitSeq, k: usize) -> BitSet {
        if b.is_empty() {
            return self.base(i, k);
        }
        self.conditional(i, b, k, false)
    }

    /// `P̄^k_{F,i}(b)`.
    pub fn p_bar_set(&self, i: usize, b: &BitSeq, k: usize) -> BitSet {
        self.conditional(i, b, k, true)
    }

    /// Splits on the first symbol: each codeword extending `b` contributes the
    /// rest of itself followed by what its next table can produce.
    fn conditional(&self, i: usize, b: &BitSeq, k: usize, strict: bool) -> BitSet {
        self.check_k(k);
        let key = (i, b.clone(), k, strict);
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let f = self.tuple;
        let mut out = BitSet::new();
        for s in f.symbols() {
            let w = f.codeword(i, s);
            let Some(rest) = w.strip_prefix(b) else { continue };
            if strict && rest.is_empty() {
                continue;
            }
            if rest.len() >= k {
                out.insert(rest.take(k));
            } else {
                let tail = self.base(f.next(i, s), k - rest.len());
                out.extend(tail.iter().map(|c| rest.concat(c)));
            }
        }
        self.memo.lock().unwrap().insert(key, out.clone());
        out
    }
}
