//! Length-preserving rewrites of code-tuples: rotation, the dot and
//! double-dot operations, the chains built from them, pruning to the
//! reachable tables and the two-table extension of a single code table.

use std::fmt;

use num_rational::BigRational;

use crate::alphabet::Symbol;
use crate::analysis;
use crate::bits::BitSeq;
use crate::classes::{classify_with, Class};
use crate::dist::SourceDist;
use crate::error::{Error, Result};
use crate::markov;
use crate::prefix_sets::{symbols_with_codeword, PrefixSets};
use crate::tuple::CodeTuple;

/// The bit appended after each codeword leading into table `i`: the forced
/// first output bit of table `i`, or nothing when both bits are possible.
pub fn rotation_bits(ps: &PrefixSets<'_>) -> Result<Vec<BitSeq>> {
    let f = ps.tuple();
    f.tables()
        .map(|i| {
            let p1 = ps.base(i, 1);
            match p1.len() {
                0 => Err(Error::NotExtendable { table: i }),
                1 => Ok(p1.into_iter().next().expect("one element")),
                _ => Ok(BitSeq::empty()),
            }
        })
        .collect()
}

/// Moves each table's forced first bit onto the end of the codewords that
/// lead into it, dropping the leading bit of tables that had one forced.
pub fn rotate(f: &CodeTuple) -> Result<CodeTuple> {
    let ps = PrefixSets::new(f);
    let d = rotation_bits(&ps)?;
    let codewords = f
        .tables()
        .map(|i| {
            let free = d[i].is_empty();
            f.symbols()
                .map(|s| {
                    let shifted = f.codeword(i, s).concat(&d[f.next(i, s)]);
                    if free {
                        Ok(shifted)
                    } else {
                        shifted.suff().ok_or_else(|| Error::Undefined {
                            operation: "rotate",
                            table: i,
                            symbol: f.alphabet().name(s).to_string(),
                            reason: "codeword and appended bit are both empty".into(),
                        })
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(f.with_codewords(codewords))
}

/// A codeword split along the chain of same-table codewords that are its
/// strict prefixes: `parts` concatenate to the codeword and `chain[r]` is the
/// symbol whose codeword ends after `parts[..=r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaDecomposition {
    pub chain: Vec<Symbol>,
    pub parts: Vec<BitSeq>,
}

impl GammaDecomposition {
    pub fn concat(&self) -> BitSeq {
        self.parts
            .iter()
            .fold(BitSeq::empty(), |acc, p| acc.concat(p))
    }
}

/// Splits `f_i(s)`. Codewords strictly below it must form a chain in which
/// each codeword belongs to a single symbol; otherwise the split is ambiguous.
pub fn gamma_decompose(f: &CodeTuple, i: usize, s: Symbol) -> Result<GammaDecomposition> {
    f.check_table(i)?;
    let target = f.codeword(i, s);
    let mut below: Vec<Symbol> = f
        .symbols()
        .filter(|&t| f.codeword(i, t).is_strict_prefix_of(target))
        .collect();
    below.sort_by_key(|&t| f.codeword(i, t).len());
    for pair in below.windows(2) {
        let (x, y) = (f.codeword(i, pair[0]), f.codeword(i, pair[1]));
        if x == y {
            return Err(Error::AmbiguousChain {
                table: i,
                first: f.alphabet().name(pair[0]).to_string(),
                second: f.alphabet().name(pair[1]).to_string(),
                codeword: x.to_string(),
            });
        }
    }
    below.push(s);
    let mut parts = Vec::with_capacity(below.len());
    let mut prev = BitSeq::empty();
    for &t in &below {
        let w = f.codeword(i, t);
        parts.push(w.strip_prefix(&prev).expect("chain is prefix ordered"));
        prev = w.clone();
    }
    Ok(GammaDecomposition {
        chain: below,
        parts,
    })
}

/// The bit `a_{F,i}`: follow the single λ codeword of a table while there is
/// exactly one, then report whether `00` can start the output (0) or not (1).
pub fn a_bit(ps: &PrefixSets<'_>, i: usize) -> Result<bool> {
    let f = ps.tuple();
    f.check_table(i)?;
    let mut visited = vec![i];
    let mut j = i;
    loop {
        let empties = symbols_with_codeword(f, j, &BitSeq::empty());
        if empties.len() == 1 {
            j = f.next(j, empties[0]);
            if let Some(at) = visited.iter().position(|&v| v == j) {
                let mut cycle = visited[at..].to_vec();
                cycle.push(j);
                return Err(Error::NonTerminatingRecursion { cycle });
            }
            visited.push(j);
            continue;
        }
        let zz: BitSeq = "00".parse().unwrap();
        return Ok(!ps.base(j, 2).contains(&zz));
    }
}

fn require(report_ok: bool, class: &'static str, reason: impl FnOnce() -> String) -> Result<()> {
    if report_ok {
        Ok(())
    } else {
        Err(Error::NotInClass {
            class,
            reason: reason(),
        })
    }
}

fn bit(b: bool) -> BitSeq {
    BitSeq::from_bits([b])
}

fn undefined(f: &CodeTuple, operation: &'static str, i: usize, s: Symbol, reason: &str) -> Error {
    Error::Undefined {
        operation,
        table: i,
        symbol: f.alphabet().name(s).to_string(),
        reason: reason.to_string(),
    }
}

/// The dot operation on a tuple whose tables all start with both bits.
pub fn dot(f: &CodeTuple) -> Result<CodeTuple> {
    let ps = PrefixSets::new(f);
    let report = classify_with(&ps);
    require(report.holds(Class::F1), "F_1", || {
        report.reason(Class::F1).unwrap_or_default().to_string()
    })?;
    let a: Vec<bool> = f.tables().map(|i| a_bit(&ps, i)).collect::<Result<_>>()?;
    let mut codewords = Vec::with_capacity(f.num_tables());
    for i in f.tables() {
        let p2_len = ps.base(i, 2).len();
        let mut row = Vec::with_capacity(f.sigma());
        for s in f.symbols() {
            let g = gamma_decompose(f, i, s)?;
            let mut out = BitSeq::empty();
            for (r, part) in g.parts.iter().enumerate() {
                let too_short = || undefined(f, "dot", i, s, "chain part shorter than two bits");
                let piece = if r == 0 {
                    if p2_len == 2 {
                        if part.len() < 2 {
                            return Err(too_short());
                        }
                        bit(a[i]).concat(&part.take(1)).concat(&part.skip(2))
                    } else {
                        part.clone()
                    }
                } else {
                    if part.len() < 2 {
                        return Err(too_short());
                    }
                    let prev = f.codeword(i, g.chain[r - 1]);
                    let j = f.next(i, g.chain[r - 1]);
                    let inner = ps.p_bar_set(i, prev, 1).len();
                    let after = ps.p_bar_set(j, &BitSeq::empty(), 1).len();
                    let rest = part.skip(2);
                    let lead = bit(!a[j]);
                    match (inner, after) {
                        (2, _) => lead.concat(&part.take(1)).concat(&rest),
                        (1, 1) => lead.concat(&bit(false)).concat(&rest),
                        (1, 2) => match ps.base(j, 2).len() {
                            2 => lead.concat(&bit(true)).concat(&rest),
                            n if n >= 3 => part.clone(),
                            _ => return Err(undefined(f, "dot", i, s, "next table has fewer than two 2-bit prefixes")),
                        },
                        _ => return Err(undefined(f, "dot", i, s, "no case applies to the one-bit continuation counts")),
                    }
                };
                out.extend_from(&piece);
            }
            row.push(out);
        }
        codewords.push(row);
    }
    Ok(f.with_codewords(codewords))
}

/// The double-dot operation on a tuple whose tables all have at least three
/// two-bit prefixes.
pub fn ddot(f: &CodeTuple) -> Result<CodeTuple> {
    let ps = PrefixSets::new(f);
    let report = classify_with(&ps);
    require(report.holds(Class::F2), "F_2", || {
        report.reason(Class::F2).unwrap_or_default().to_string()
    })?;
    let mut codewords = Vec::with_capacity(f.num_tables());
    for i in f.tables() {
        let p2 = ps.base(i, 2);
        let mut row = Vec::with_capacity(f.sigma());
        for s in f.symbols() {
            let g = gamma_decompose(f, i, s)?;
            let mut out = BitSeq::empty();
            for (r, part) in g.parts.iter().enumerate() {
                let piece = if r == 0 {
                    if p2.len() == 4 || part.is_empty() {
                        // An empty first part has nothing to rewrite.
                        part.clone()
                    } else if part.len() == 1 {
                        bit(true)
                    } else {
                        let probe = BitSeq::from_bits([part.bit(0), !part.bit(1)]);
                        if p2.contains(&probe) {
                            bit(true).concat(&part.skip(1))
                        } else {
                            "01".parse::<BitSeq>().unwrap().concat(&part.skip(2))
                        }
                    }
                } else {
                    if part.len() < 2 {
                        return Err(undefined(f, "ddot", i, s, "chain part shorter than two bits"));
                    }
                    "00".parse::<BitSeq>().unwrap().concat(&part.skip(2))
                };
                out.extend_from(&piece);
            }
            row.push(out);
        }
        codewords.push(row);
    }
    Ok(f.with_codewords(codewords))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    F1,
    F2,
    F3,
}

impl Target {
    fn class(self) -> Class {
        match self {
            Target::F1 => Class::F1,
            Target::F2 => Class::F2,
            Target::F3 => Class::F3,
        }
    }

    fn source(self) -> Class {
        match self {
            Target::F1 => Class::F0,
            Target::F2 => Class::F1,
            Target::F3 => Class::F2,
        }
    }
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(Target::F1),
            "f2" => Ok(Target::F2),
            "f3" => Ok(Target::F3),
            _ => Err(format!("unknown target {s:?} (expected f1, f2 or f3)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub op: &'static str,
    pub input: CodeTuple,
    pub output: CodeTuple,
    /// Per-table bits that drove the step: the rotation bits for `rotate`,
    /// `a_{F,i}` for `dot`, empty for `ddot`.
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformTrace {
    pub start: CodeTuple,
    pub steps: Vec<TraceStep>,
    pub length: BigRational,
}

impl TransformTrace {
    pub fn result(&self) -> &CodeTuple {
        self.steps.last().map_or(&self.start, |s| &s.output)
    }

    pub fn ops(&self) -> Vec<&'static str> {
        self.steps.iter().map(|s| s.op).collect()
    }
}

impl fmt::Display for TransformTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "steps = {}", self.steps.len())?;
        writeln!(f, "L = {}", self.length)?;
        for (n, step) in self.steps.iter().enumerate() {
            writeln!(f)?;
            writeln!(f, "# step {} {}", n + 1, step.op)?;
            if !step.values.is_empty() {
                writeln!(f, "# values = {}", step.values.join(" "))?;
            }
            write!(f, "{}", step.output)?;
        }
        Ok(())
    }
}

fn check_length(next: &CodeTuple, mu: &SourceDist, before: &BigRational) -> Result<()> {
    let after = markov::average_length(next, mu)?;
    if &after != before {
        return Err(Error::LengthNotPreserved {
            before: before.to_string(),
            after: after.to_string(),
        });
    }
    Ok(())
}

fn rotate_step(f: &CodeTuple) -> Result<TraceStep> {
    let ps = PrefixSets::new(f);
    let d = rotation_bits(&ps)?;
    let output = rotate(f)?;
    Ok(TraceStep {
        op: "rotate",
        input: f.clone(),
        output,
        values: d.iter().map(BitSeq::to_string).collect(),
    })
}

fn dot_step(f: &CodeTuple) -> Result<TraceStep> {
    let ps = PrefixSets::new(f);
    let a: Vec<String> = f
        .tables()
        .map(|i| a_bit(&ps, i).map(|b| u8::from(b).to_string()))
        .collect::<Result<_>>()?;
    Ok(TraceStep {
        op: "dot",
        input: f.clone(),
        output: dot(f)?,
        values: a,
    })
}

/// Rewrites `f` until it reaches `target`, checking that the average length
/// stays fixed at every step.
///
/// Reaching `F_1` repeats rotation, at most `2·(max codeword length) + 2` times.
/// Reaching `F_2` repeats dot followed by rotation, at most `|F| + 1` rounds.
/// Reaching `F_3` takes one double-dot step.
pub fn chain_to_class(f: &CodeTuple, mu: &SourceDist, target: Target) -> Result<TransformTrace> {
    let holds = |g: &CodeTuple, c: Class| classify_with(&PrefixSets::new(g)).holds(c);
    let start_report = classify_with(&PrefixSets::new(f));
    let source = target.source();
    require(start_report.holds(source), source.name(), || {
        start_report.reason(source).unwrap_or_default().to_string()
    })?;
    let length = markov::average_length(f, mu)?;
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut current = f.clone();
    match target {
        Target::F1 => {
            let limit = 2 * f.max_codeword_len() + 2;
            while !holds(&current, Class::F1) {
                if steps.len() == limit {
                    return Err(Error::StepLimitExceeded { limit });
                }
                let step = rotate_step(&current)?;
                check_length(&step.output, mu, &length)?;
                current = step.output.clone();
                steps.push(step);
            }
        }
        Target::F2 => {
            let limit = f.num_tables() + 1;
            let mut rounds = 0;
            while !holds(&current, Class::F2) {
                if rounds == limit {
                    return Err(Error::StepLimitExceeded { limit });
                }
                let dotted = dot_step(&current)?;
                let rotated = rotate_step(&dotted.output)?;
                for step in [dotted, rotated] {
                    check_length(&step.output, mu, &length)?;
                    current = step.output.clone();
                    steps.push(step);
                }
                rounds += 1;
            }
        }
        Target::F3 => {
            let output = ddot(&current)?;
            check_length(&output, mu, &length)?;
            steps.push(TraceStep {
                op: "ddot",
                input: current.clone(),
                output,
                values: Vec::new(),
            });
        }
    }
    let trace = TransformTrace {
        start: f.clone(),
        steps,
        length,
    };
    let end = classify_with(&PrefixSets::new(trace.result()));
    let goal = target.class();
    require(end.holds(goal), goal.name(), || {
        end.reason(goal).unwrap_or_default().to_string()
    })?;
    Ok(trace)
}

/// Restricts `f` to the tables reachable from every table and renumbers them
/// in their original order. That set is closed under the next-table maps, so
/// the result is self-contained.
pub fn prune_to_reachable(f: &CodeTuple) -> Result<CodeTuple> {
    let keep = analysis::reachability(f).members;
    if keep.is_empty() {
        return Err(Error::NotRegular);
    }
    let mut index = vec![usize::MAX; f.num_tables()];
    for (new, &old) in keep.iter().enumerate() {
        index[old] = new;
    }
    let codewords = keep.iter().map(|&i| f.table(i).to_vec()).collect();
    let next = keep
        .iter()
        .map(|&i| {
            f.next_table(i)
                .iter()
                .map(|&j| {
                    debug_assert_ne!(index[j], usize::MAX, "reachable set is closed");
                    index[j]
                })
                .collect()
        })
        .collect();
    CodeTuple::new(f.alphabet().clone(), codewords, next)
}

/// Adds a second table to a single-table tuple: `01` for the first symbol,
/// `1^(r-1) 0` for the middle ones and `1^(σ-1)` for the last, all leading
/// back to table 0.
pub fn extend_to_two_tables(f: &CodeTuple) -> Result<CodeTuple> {
    if f.num_tables() != 1 {
        return Err(Error::WrongTableCount {
            expected: 1,
            actual: f.num_tables(),
        });
    }
    let sigma = f.sigma();
    let second: Vec<BitSeq> = (1..=sigma)
        .map(|r| {
            if r == 1 {
                "01".parse().unwrap()
            } else if r < sigma {
                BitSeq::repeat(true, r - 1).concat(&bit(false))
            } else {
                BitSeq::repeat(true, sigma - 1)
            }
        })
        .collect();
    CodeTuple::new(
        f.alphabet().clone(),
        vec![f.table(0).to_vec(), second],
        vec![f.next_table(0).to_vec(), vec![0; sigma]],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goldens;

    fn g(name: &str) -> CodeTuple {
        goldens::tuple(name)
    }

    fn b(s: &str) -> BitSeq {
        s.parse().unwrap()
    }

    #[test]
    fn rotation_chain_from_gamma() {
        assert_eq!(rotate(&g("gamma")).unwrap(), g("delta"));
        assert_eq!(rotate(&g("delta")).unwrap(), g("epsilon"));
        assert_eq!(rotate(&g("epsilon")).unwrap(), g("epsilon"));
        assert_eq!(rotate(&g("zeta")).unwrap(), g("eta"));
        assert!(matches!(rotate(&g("alpha")), Err(Error::NotExtendable { table: 2 })));
    }

    #[test]
    fn rotation_bits_of_delta() {
        let d = g("delta");
        let bits = rotation_bits(&PrefixSets::new(&d)).unwrap();
        assert_eq!(bits, vec![b("-"), b("-"), b("1")]);
        assert_eq!(rotate(&d).unwrap().codeword(2, Symbol(0)), &b("00"));
    }

    #[test]
    fn gamma_decompositions() {
        let e = g("epsilon");
        let dec = gamma_decompose(&e, 1, Symbol(3)).unwrap();
        assert_eq!(dec.chain, vec![Symbol(1), Symbol(0), Symbol(2), Symbol(3)]);
        assert_eq!(dec.parts, vec![b("-"), b("00"), b("111"), b("11")]);
        let dec = gamma_decompose(&e, 0, Symbol(2)).unwrap();
        assert_eq!(dec.chain, vec![Symbol(0), Symbol(2)]);
        assert_eq!(dec.parts, vec![b("01"), b("00")]);
        let dec = gamma_decompose(&e, 0, Symbol(1)).unwrap();
        assert_eq!(dec.parts, vec![b("10")]);
    }

    #[test]
    fn shared_strict_prefix_is_ambiguous() {
        let f = CodeTuple::from_rows(&[&[("0", 0), ("0", 0), ("01", 0)]]);
        assert!(matches!(
            gamma_decompose(&f, 0, Symbol(2)),
            Err(Error::AmbiguousChain { .. })
        ));
    }

    #[test]
    fn a_bits_of_epsilon() {
        let e = g("epsilon");
        let ps = PrefixSets::new(&e);
        let a: Vec<bool> = (0..3).map(|i| a_bit(&ps, i).unwrap()).collect();
        assert_eq!(a, vec![true, true, false]);
    }

    #[test]
    fn lambda_cycles_are_reported() {
        let f = CodeTuple::from_rows(&[&[("-", 1), ("0", 0)], &[("-", 0), ("1", 1)]]);
        let ps = PrefixSets::new(&f);
        match a_bit(&ps, 0) {
            Err(Error::NonTerminatingRecursion { cycle }) => assert_eq!(cycle, vec![0, 1, 0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dot_of_epsilon_is_zeta() {
        let z = dot(&g("epsilon")).unwrap();
        assert_eq!(z.codeword(0, Symbol(2)), &b("1000"));
        assert_eq!(z.codeword(1, Symbol(2)), &b("01001"));
        assert_eq!(z.codeword(1, Symbol(3)), &b("0100100"));
        // Table 2, symbol c: the chain is (b, c) with parts 10 and 0011, and the
        // rule for a one-bit continuation into a two-element table gives 0111.
        assert_eq!(z.codeword(2, Symbol(2)), &b("100111"));
        let zeta = g("zeta");
        for i in z.tables() {
            for s in z.symbols() {
                if (i, s) != (2, Symbol(2)) {
                    assert_eq!(z.codeword(i, s), zeta.codeword(i, s), "table {i}, {s:?}");
                }
                assert_eq!(z.next(i, s), zeta.next(i, s));
            }
        }
        assert!(matches!(dot(&g("gamma")), Err(Error::NotInClass { class: "F_1", .. })));
    }

    #[test]
    fn ddot_of_eta_is_theta() {
        let t = ddot(&g("eta")).unwrap();
        assert_eq!(t.codeword(2, Symbol(3)), &b("111"));
        assert_eq!(t.codeword(0, Symbol(3)), &b("001"));
        assert_eq!(t, g("theta"));
        assert!(matches!(ddot(&g("epsilon")), Err(Error::NotInClass { class: "F_2", .. })));
    }

    #[test]
    fn chains() {
        let mu = goldens::example_dist();
        let t = chain_to_class(&g("gamma"), &mu, Target::F1).unwrap();
        assert_eq!(t.ops(), ["rotate", "rotate"]);
        assert_eq!(t.result(), &g("epsilon"));
        let t = chain_to_class(&g("epsilon"), &mu, Target::F2).unwrap();
        assert_eq!(t.ops(), ["dot", "rotate"]);
        assert_eq!(t.steps[0].output, dot(&g("epsilon")).unwrap());
        assert_eq!(t.result().table(0), g("eta").table(0));
        assert_eq!(t.result().table(1), g("eta").table(1));
        let t = chain_to_class(&g("zeta"), &mu, Target::F2);
        assert!(t.is_err(), "zeta is outside F_1");
        assert_eq!(rotate(&g("zeta")).unwrap(), g("eta"));
        let t = chain_to_class(&g("eta"), &mu, Target::F3).unwrap();
        assert_eq!(t.ops(), ["ddot"]);
        assert_eq!(t.result(), &g("theta"));
        let t = chain_to_class(&g("epsilon"), &mu, Target::F1).unwrap();
        assert!(t.steps.is_empty());
        assert!(chain_to_class(&g("beta"), &mu, Target::F1).is_err());
    }

    #[test]
    fn pruning() {
        assert_eq!(prune_to_reachable(&g("gamma")).unwrap(), g("gamma"));
        let a = prune_to_reachable(&g("alpha")).unwrap();
        assert_eq!(a.num_tables(), 1);
        assert_eq!(a.table(0), g("alpha").table(2));
        assert_eq!(a.next_table(0), &[0, 0, 0, 0]);
        assert!(matches!(prune_to_reachable(&g("beta")), Err(Error::NotRegular)));
        let one = CodeTuple::from_rows(&[&[("0", 0), ("1", 0)]]);
        assert_eq!(prune_to_reachable(&one).unwrap(), one);
    }

    #[test]
    fn two_table_extension() {
        let second = |sigma: usize| {
            let rows: Vec<(&str, usize)> = (0..sigma).map(|_| ("0", 0)).collect();
            let f = CodeTuple::from_rows(&[&rows]);
            let e = extend_to_two_tables(&f).unwrap();
            assert_eq!(e.table(0), f.table(0));
            assert!(e.next_table(1).iter().all(|&j| j == 0));
            e.table(1).iter().map(|c| c.to_string()).collect::<Vec<_>>()
        };
        assert_eq!(second(2), ["01", "1"]);
        assert_eq!(second(3), ["01", "10", "11"]);
        assert_eq!(second(4), ["01", "10", "110", "111"]);
        assert!(matches!(
            extend_to_two_tables(&g("kappa")),
            Err(Error::WrongTableCount { expected: 1, actual: 2 })
        ));
    }
}
