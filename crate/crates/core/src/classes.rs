//! Membership in the nested code-tuple classes, with the first failing
//! condition recorded for every class that does not hold.

use std::fmt;

use crate::analysis;
use crate::bits::{format_set, BitSeq};
use crate::dist::SourceDist;
use crate::error::Result;
use crate::prefix_sets::{BitSet, PrefixSets};
use crate::tuple::CodeTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Ext,
    Reg,
    Dec2,
    F0,
    F1,
    F2,
    F3,
    F4,
    Aifv,
}

impl Class {
    pub const ALL: [Class; 9] = [
        Class::Ext,
        Class::Reg,
        Class::Dec2,
        Class::F0,
        Class::F1,
        Class::F2,
        Class::F3,
        Class::F4,
        Class::Aifv,
    ];

    /// The nested chain `F_0 ⊇ F_1 ⊇ F_2 ⊇ F_3 ⊇ F_4 ⊇ F_AIFV`.
    pub const CHAIN: [Class; 6] = [Class::F0, Class::F1, Class::F2, Class::F3, Class::F4, Class::Aifv];

    pub fn name(self) -> &'static str {
        match self {
            Class::Ext => "F_ext",
            Class::Reg => "F_reg",
            Class::Dec2 => "F_2dec",
            Class::F0 => "F_0",
            Class::F1 => "F_1",
            Class::F2 => "F_2",
            Class::F3 => "F_3",
            Class::F4 => "F_4",
            Class::Aifv => "F_AIFV",
        }
    }

    pub fn from_name(name: &str) -> Option<Class> {
        Class::ALL.iter().copied().find(|c| c.name() == name.trim())
    }

    fn index(self) -> usize {
        Class::ALL.iter().position(|&c| c == self).expect("listed")
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    flags: [bool; 9],
    /// First violated condition for each class that fails, in `Class::ALL` order.
    pub failures: Vec<(Class, String)>,
    /// Longest `b` considered by the single-continuation clause of the AIFV check.
    pub aifv_horizon: usize,
}

impl ClassReport {
    /// A report with the given memberships and no witnesses; used to test
    /// hierarchy checks against fabricated input.
    pub fn from_flags(members: &[Class]) -> Self {
        let mut flags = [false; 9];
        for c in members {
            flags[c.index()] = true;
        }
        ClassReport {
            flags,
            failures: Vec::new(),
            aifv_horizon: 0,
        }
    }

    pub fn holds(&self, c: Class) -> bool {
        self.flags[c.index()]
    }

    pub fn reason(&self, c: Class) -> Option<&str> {
        self.failures
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, r)| r.as_str())
    }

    /// The most specific position in the chain, e.g. `F_1 \ F_2`; outside
    /// `F_0` it lists the supporting classes that do hold.
    pub fn label(&self) -> String {
        if self.holds(Class::Aifv) && self.holds(Class::F4) {
            return "F_AIFV".into();
        }
        if let Some(w) = Class::CHAIN.windows(2).rev().find(|w| self.holds(w[0])) {
            return format!("{} \\ {}", w[0], w[1]);
        }
        let held: Vec<&str> = [Class::Ext, Class::Reg, Class::Dec2]
            .iter()
            .filter(|&&c| self.holds(c))
            .map(|c| c.name())
            .collect();
        if held.is_empty() {
            "outside F_ext, F_reg and F_2dec".into()
        } else {
            format!("{} \\ F_0", held.join(" ∩ "))
        }
    }

    /// Checks a label of the form `X` or `X \ Y`: membership in `X` and, when
    /// given, non-membership in `Y`. Returns `None` for an unreadable label.
    pub fn matches_label(&self, label: &str) -> Option<bool> {
        let mut parts = label.split('\\');
        let inside = Class::from_name(parts.next()?)?;
        let outside = match parts.next() {
            Some(p) => Some(Class::from_name(p)?),
            None => None,
        };
        if parts.next().is_some() {
            return None;
        }
        Some(self.holds(inside) && outside.is_none_or(|c| !self.holds(c)))
    }

    fn set(&mut self, c: Class, ok: std::result::Result<(), String>) {
        match ok {
            Ok(()) => self.flags[c.index()] = true,
            Err(reason) => self.failures.push((c, reason)),
        }
    }
}

fn set_text(set: &BitSet) -> String {
    format_set(set.iter())
}

/// Classifies `f`; `mu` only feeds the debug cross-check of regularity,
/// which does not otherwise depend on the (positive) probabilities.
pub fn classify(f: &CodeTuple, mu: &SourceDist) -> Result<ClassReport> {
    analysis::is_regular(f, mu)?;
    Ok(classify_tuple(f))
}

pub fn classify_tuple(f: &CodeTuple) -> ClassReport {
    let ps = PrefixSets::new(f);
    classify_with(&ps)
}

pub fn classify_with(ps: &PrefixSets<'_>) -> ClassReport {
    let f = ps.tuple();
    let mut report = ClassReport::from_flags(&[]);

    let dec = analysis::decodability(ps, 2);
    let dec_ok = match dec.violations.first() {
        None => Ok(()),
        Some(v) => Err(v.describe(f)),
    };
    report.set(Class::Dec2, dec_ok.clone());

    let reach = analysis::reachability(f);
    let reg_ok = if reach.members.is_empty() {
        Err("no table is reachable from every table".to_string())
    } else {
        Ok(())
    };
    report.set(Class::Reg, reg_ok.clone());

    let ext_ok = match analysis::unextendable_table(ps) {
        None => Ok(()),
        Some(i) => Err(format!("P1[{i}] is empty")),
    };
    report.set(Class::Ext, ext_ok.clone());

    let base = reg_ok.and(dec_ok);
    report.set(Class::F0, base.clone().and(ext_ok));

    let one_bit = BitSet::from(["0".parse().unwrap(), "1".parse().unwrap()]);
    let p1 = |i: usize| ps.base(i, 1);
    let p2 = |i: usize| ps.base(i, 2);
    let every = |test: &dyn Fn(usize) -> std::result::Result<(), String>| {
        f.tables().try_for_each(test)
    };

    report.set(
        Class::F1,
        base.clone().and_then(|_| {
            every(&|i| {
                let s = p1(i);
                if s == one_bit {
                    Ok(())
                } else {
                    Err(format!("P1[{i}]={} is not {{0,1}}", set_text(&s)))
                }
            })
        }),
    );
    report.set(
        Class::F2,
        base.clone().and_then(|_| {
            every(&|i| {
                let s = p2(i);
                if s.len() >= 3 {
                    Ok(())
                } else {
                    Err(format!("P2[{i}]={} has fewer than three elements", set_text(&s)))
                }
            })
        }),
    );
    let three = bits_set(&["01", "10", "11"]);
    let four = bits_set(&["00", "01", "10", "11"]);
    report.set(
        Class::F3,
        base.clone().and_then(|_| {
            every(&|i| {
                let s = p2(i);
                if s.is_superset(&three) {
                    Ok(())
                } else {
                    Err(format!("P2[{i}]={} does not contain {{01,10,11}}", set_text(&s)))
                }
            })
        }),
    );
    report.set(
        Class::F4,
        base.and_then(|_| {
            if f.num_tables() != 2 {
                return Err(format!("has {} tables, not 2", f.num_tables()));
            }
            let (s0, s1) = (p2(0), p2(1));
            if s0 != four {
                Err(format!("P2[0]={} is not {{00,01,10,11}}", set_text(&s0)))
            } else if s1 != three {
                Err(format!("P2[1]={} is not {{01,10,11}}", set_text(&s1)))
            } else {
                Ok(())
            }
        }),
    );

    let (aifv, horizon) = aifv_check(ps);
    report.aifv_horizon = horizon;
    report.set(Class::Aifv, aifv);
    report
}

fn bits_set(items: &[&str]) -> BitSet {
    items.iter().map(|s| s.parse::<BitSeq>().unwrap()).collect()
}

/// `(membership, failing clause)` for the seven AIFV conditions.
pub fn is_aifv(f: &CodeTuple) -> (bool, Option<String>) {
    let ps = PrefixSets::new(f);
    match aifv_check(&ps).0 {
        Ok(()) => (true, None),
        Err(e) => (false, Some(e)),
    }
}

/// The single-continuation condition quantifies over every `b`, but `P̄^1_{F,i}(b)` is empty unless
/// `b` is a strict prefix of some codeword of table `i`, so enumerating those
/// prefixes is exhaustive. The returned horizon (`max codeword length + 2`)
/// bounds every `b` examined and is kept for reporting.
fn aifv_check(ps: &PrefixSets<'_>) -> (std::result::Result<(), String>, usize) {
    let f = ps.tuple();
    let horizon = f.max_codeword_len() + 2;
    if f.num_tables() != 2 {
        return (Err(format!("has {} tables, not 2", f.num_tables())), horizon);
    }
    let name = |s| f.alphabet().name(s).to_string();
    let zero: BitSeq = "0".parse().unwrap();
    let one: BitSeq = "1".parse().unwrap();
    let check = || -> std::result::Result<(), String> {
        for i in 0..2 {
            if !f.is_injective(i) {
                return Err(format!("injectivity: f_{i} is not injective"));
            }
        }
        for i in 0..2 {
            for s in f.symbols() {
                let w = f.codeword(i, s);
                if ps.p_bar_set(i, w, 1).contains(&one) {
                    return Err(format!(
                        "continuation: table {i}, symbol {}: 1 can follow {w} inside a longer codeword",
                        name(s)
                    ));
                }
                let w0 = w.concat(&zero);
                if ps.p_bar_set(i, &w0, 1).contains(&one) {
                    return Err(format!(
                        "continuation: table {i}, symbol {}: 1 can follow {w0} inside a longer codeword",
                        name(s)
                    ));
                }
            }
        }
        for i in 0..2 {
            for s in f.symbols() {
                let w0 = f.codeword(i, s).concat(&zero);
                if let Some(t) = f.symbols().find(|&t| f.codeword(i, t) == &w0) {
                    return Err(format!(
                        "sibling: table {i}: codeword of {} is codeword of {} followed by 0",
                        name(t),
                        name(s)
                    ));
                }
            }
        }
        for i in 0..2 {
            for s in f.symbols() {
                let leaf = ps.p_bar_set(i, f.codeword(i, s), 0).is_empty();
                let want = if leaf { 0 } else { 1 };
                if f.next(i, s) != want {
                    return Err(format!(
                        "next table: table {i}, symbol {}: next table is {} but should be {want}",
                        name(s),
                        f.next(i, s)
                    ));
                }
            }
        }
        for s in f.symbols() {
            let w = f.codeword(1, s);
            if w.is_empty() || w == &zero {
                return Err(format!("table 1 codeword: f_1({}) = {w}", name(s)));
            }
        }
        if ps.p_bar_set(1, &zero, 1).contains(&zero) {
            return Err("table 1 continuation: 0 can follow 0 inside a longer codeword of table 1".into());
        }
        for i in 0..2 {
            for b in strict_prefixes(f.table(i)) {
                debug_assert!(b.len() <= horizon);
                if ps.p_bar_set(i, &b, 1).len() != 1 {
                    continue;
                }
                let near_codeword = f.symbols().any(|s| {
                    b.strip_prefix(f.codeword(i, s))
                        .is_some_and(|c| c.len() <= 1)
                });
                if !near_codeword && !(i == 1 && b == zero) {
                    return Err(format!(
                        "single continuation: table {i}: only one bit can follow {b} and {b} is not a codeword plus at most one bit"
                    ));
                }
            }
        }
        Ok(())
    };
    (check(), horizon)
}

/// Every strict prefix of some codeword, in length-then-lexicographic order.
fn strict_prefixes(codewords: &[BitSeq]) -> Vec<BitSeq> {
    let mut out: Vec<BitSeq> = codewords
        .iter()
        .flat_map(|w| (0..w.len()).map(|n| w.take(n)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Every report is downward closed along `F_0 ⊇ … ⊇ F_AIFV`.
pub fn verify_hierarchy(reports: &[ClassReport]) -> bool {
    reports.iter().all(|r| {
        Class::CHAIN
            .windows(2)
            .all(|w| !r.holds(w[1]) || r.holds(w[0]))
    })
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in Class::ALL {
            match self.reason(c) {
                None if self.holds(c) => writeln!(f, "{c} = PASS")?,
                None => writeln!(f, "{c} = FAIL")?,
                Some(r) => writeln!(f, "{c} = FAIL ({r})")?,
            }
        }
        writeln!(f, "aifv_horizon = {}", self.aifv_horizon)?;
        write!(f, "class = {}", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goldens;

    #[test]
    fn worked_classes() {
        let label = |n: &str| classify_tuple(&goldens::tuple(n)).label();
        assert_eq!(label("gamma"), "F_0 \\ F_1");
        assert_eq!(label("epsilon"), "F_1 \\ F_2");
        assert_eq!(label("eta"), "F_2 \\ F_3");
        assert_eq!(label("theta"), "F_3 \\ F_4");
        assert_eq!(label("iota"), "F_4 \\ F_AIFV");
        assert_eq!(label("kappa"), "F_AIFV");
    }

    #[test]
    fn reference_labels() {
        let report = |n: &str| classify_tuple(&goldens::tuple(n));
        for row in &goldens::PREFIX_TABLE {
            let got = report(row.name).matches_label(row.class);
            // The beta label claims regularity, but no table of beta is
            // reachable from every table.
            assert_eq!(got, Some(row.name != "beta"), "{}", row.name);
        }
        assert_eq!(report("gamma").matches_label("F_0 \\ F_1 \\ F_2"), None);
        assert_eq!(report("gamma").matches_label("F_9"), None);
    }

    #[test]
    fn aifv_membership() {
        assert_eq!(is_aifv(&goldens::tuple("kappa")), (true, None));
        let (ok, why) = is_aifv(&goldens::tuple("iota"));
        assert!(!ok);
        assert!(!why.unwrap().is_empty());
        let (ok, why) = is_aifv(&goldens::tuple("gamma"));
        assert!(!ok);
        assert!(why.unwrap().contains("3 tables"));
    }

    #[test]
    fn hierarchy_check() {
        let reports: Vec<_> = goldens::all().iter().map(|(_, f)| classify_tuple(f)).collect();
        assert!(verify_hierarchy(&reports));
        assert!(verify_hierarchy(&[]));
        assert!(!verify_hierarchy(&[ClassReport::from_flags(&[Class::F0, Class::F2])]));
    }

    #[test]
    fn strict_prefixes_are_sorted_and_unique() {
        let words: Vec<BitSeq> = ["01", "011", "-"].iter().map(|s| s.parse().unwrap()).collect();
        let got: Vec<String> = strict_prefixes(&words).iter().map(|b| b.to_string()).collect();
        assert_eq!(got, ["-", "0", "01"]);
    }
}
