//! Recomputes every reference worked value for the ten built-in code-tuples
//! and reports each comparison.

use std::fmt;

use num_rational::BigRational;

use crate::alphabet::{SourceSeq, Symbol};
use crate::analysis::{self, Violation};
use crate::bits::{format_set, BitSeq};
use crate::classes::{self, Class};
use crate::codec;
use crate::goldens::{self, GAMMA_STRICT_SETS, PREFIX_TABLE, REACHABLE};
use crate::markov;
use crate::prefix_sets::{self, PrefixSets};
use crate::transforms::{self, Target};
use crate::tuple::CodeTuple;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub item: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.item, self.detail)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, item: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            item: item.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn equal<T: PartialEq + fmt::Debug>(&mut self, item: impl Into<String>, got: T, want: T) {
        let passed = got == want;
        let detail = if passed {
            format!("{got:?}")
        } else {
            format!("got {got:?}, expected {want:?}")
        };
        self.add(item, passed, detail);
    }

    fn tuples(&mut self, item: impl Into<String>, got: &CodeTuple, want: &CodeTuple) {
        let diff = got.differences(want);
        let detail = if diff.is_empty() {
            "identical".to_string()
        } else {
            format!("differs at {} (computed vs reference)", diff.join("; "))
        };
        self.add(item, diff.is_empty(), detail);
    }
}

fn g(name: &str) -> CodeTuple {
    goldens::tuple(name)
}

fn b(s: &str) -> BitSeq {
    s.parse().expect("literal bit string")
}

fn seq(f: &CodeTuple, text: &str) -> SourceSeq {
    f.alphabet().parse_seq(text).expect("literal sequence")
}

fn names(f: &CodeTuple, symbols: &[Symbol]) -> String {
    symbols.iter().map(|&s| f.alphabet().name(s)).collect()
}

fn texts(values: &[BigRational]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn strs(values: &[&str]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

/// Runs every comparison; the order is stable.
pub fn run() -> Vec<Check> {
    let mut c = Checks(Vec::new());
    let mu = goldens::example_dist();

    for (name, f) in goldens::all() {
        let back = CodeTuple::parse(&f.serialize());
        c.add(
            format!("{name} text round trip"),
            back.as_ref().is_ok_and(|t| t == &f),
            "serialize then parse",
        );
    }

    let alpha = g("alpha");
    c.equal(
        "S(alpha,0,110)",
        names(&alpha, &prefix_sets::symbols_with_codeword(&alpha, 0, &b("110"))),
        "ac".to_string(),
    );
    c.equal(
        "S(alpha,2,-)",
        names(&alpha, &prefix_sets::symbols_with_codeword(&alpha, 2, &BitSeq::empty())),
        "abcd".to_string(),
    );
    let beta = g("beta");
    c.equal(
        "S(beta,1,00000000)",
        prefix_sets::symbols_with_codeword(&beta, 1, &b("00000000")).len(),
        0,
    );

    let gamma = g("gamma");
    let (bits, end) = prefix_sets::f_star(&gamma, 0, &seq(&gamma, "badb"));
    c.equal("f*(gamma,0,badb)", (bits.to_string(), end), ("1000001111110".into(), 0));
    let (bits, end) = prefix_sets::f_star(&gamma, 0, &seq(&gamma, "b"));
    c.equal("f*(gamma,0,b)", (bits.to_string(), end), ("10".into(), 1));
    c.equal(
        "10000 is an encoding prefix from gamma table 0",
        prefix_sets::p_star_contains(&gamma, 0, &b("10000")),
        true,
    );
    c.equal(
        "00 is not an encoding prefix from gamma table 0",
        prefix_sets::p_star_contains(&gamma, 0, &b("00")),
        false,
    );
    match codec::decode(&gamma, 0, &b("1000001111110"), 2) {
        Ok(out) => c.add(
            "decode gamma badb",
            out.symbols == seq(&gamma, "badb") && out.tail.is_empty(),
            format!("{} with tail {}", gamma.alphabet().format_seq(&out.symbols), out.tail.window),
        ),
        Err(e) => c.add("decode gamma badb", false, e.to_string()),
    }
    let bc = codec::encode(&gamma, 0, &seq(&gamma, "bc")).ok();
    let bd = codec::encode(&gamma, 0, &seq(&gamma, "bd")).ok();
    c.add(
        "shared encoding of bc and bd",
        bc == Some(b("1000111")) && bc == bd,
        "f*(gamma,0,bc) = f*(gamma,0,bd) = 1000111",
    );
    match codec::decode(&gamma, 0, &b("1000111"), 2) {
        Ok(out) => {
            let tails: Vec<String> = out
                .tail
                .completions
                .iter()
                .map(|x| gamma.alphabet().format_seq(x))
                .collect();
            c.add(
                "shared encoding decodes with an ambiguous tail",
                out.symbols == seq(&gamma, "b") && tails == ["c", "d"],
                format!("decoded {}, tail completions {:?}", gamma.alphabet().format_seq(&out.symbols), tails),
            );
        }
        Err(e) => c.add("shared encoding decodes with an ambiguous tail", false, e.to_string()),
    }

    let ps_beta = PrefixSets::new(&beta);
    c.equal(
        "P3(beta,0,101)",
        format_set(&ps_beta.p_set(0, &b("101"), 3)),
        "{100,101,111}".to_string(),
    );
    c.equal(
        "strict P0(beta,1,011)",
        format_set(&ps_beta.p_bar_set(1, &b("011"), 0)),
        "{-}".to_string(),
    );

    for row in &PREFIX_TABLE {
        let f = g(row.name);
        let ps = PrefixSets::new(&f);
        let p1: Vec<String> = f.tables().map(|i| format_set(&ps.base(i, 1))).collect();
        let p2: Vec<String> = f.tables().map(|i| format_set(&ps.base(i, 2))).collect();
        c.equal(format!("{} P1", row.name), p1, row.p1.iter().map(|s| s.to_string()).collect());
        c.equal(format!("{} P2", row.name), p2, row.p2.iter().map(|s| s.to_string()).collect());
        let report = classes::classify_with(&ps);
        let detail = format!("reference {:?}, computed {:?}", row.class, report.label());
        match report.matches_label(row.class) {
            Some(true) => c.add(format!("{} class", row.name), true, detail),
            Some(false) => {
                let why = row
                    .class
                    .split('\\')
                    .next()
                    .and_then(Class::from_name)
                    .and_then(|x| report.reason(x).map(|r| format!("; {x} fails: {r}")))
                    .unwrap_or_default();
                c.add(format!("{} class", row.name), false, detail + &why);
            }
            None => c.add(format!("{} class", row.name), false, "unreadable label"),
        }
    }

    let ps_gamma = PrefixSets::new(&gamma);
    for (s, row) in GAMMA_STRICT_SETS.iter().enumerate() {
        for (i, want) in row.iter().enumerate() {
            let set = ps_gamma.p_bar_set(i, gamma.codeword(i, Symbol(s)), 2);
            c.equal(
                format!("gamma strict P2 of symbol {} table {i}", gamma.alphabet().name(Symbol(s))),
                format_set(&set),
                want.to_string(),
            );
        }
    }

    c.equal("gamma is 2-bit delay decodable", analysis::decodability(&ps_gamma, 2).decodable(), true);
    let one = analysis::decodability(&ps_gamma, 1);
    c.equal(
        "gamma 1-bit witness",
        one.violations.contains(&Violation::SharedCodeword {
            table: 1,
            first: Symbol(2),
            second: Symbol(3),
            bits: b("1"),
        }),
        true,
    );
    let beta_fails = (0..=3).all(|k| {
        analysis::decodability(&ps_beta, k).violations.iter().any(|v| {
            matches!(v, Violation::SharedCodeword { table: 1, first: Symbol(0), second: Symbol(1), .. })
        })
    });
    c.equal("beta fails for k = 0..3 on f1(a) = f1(b)", beta_fails, true);
    c.equal("alpha is not extendable", analysis::is_extendable(&alpha), false);
    c.equal("gamma is extendable", analysis::is_extendable(&gamma), true);

    match markov::transition_matrix(&gamma, &mu) {
        Ok(q) => c.equal(
            "gamma transition matrix",
            q.entries.iter().map(|row| texts(row)).collect::<Vec<_>>(),
            vec![strs(&["2/5", "1/5", "2/5"]), strs(&["1/5", "2/5", "2/5"]), strs(&["1/5", "1/10", "7/10"])],
        ),
        Err(e) => c.add("gamma transition matrix", false, e.to_string()),
    }
    c.equal(
        "gamma stationary distribution",
        markov::stationary(&gamma, &mu).map(|pi| texts(&pi)).ok(),
        Some(strs(&["1/4", "5/28", "4/7"])),
    );
    let li: Vec<_> = (0..3).filter_map(|i| markov::table_length(&gamma, i, &mu).ok()).collect();
    c.equal("gamma table lengths", texts(&li), strs(&["13/5", "37/10", "21/5"]));
    let l_gamma = markov::average_length(&gamma, &mu).ok();
    c.equal(
        "gamma average length",
        l_gamma.as_ref().map(|l| (l.to_string(), markov::round_half_even(l, 4))),
        Some(("1039/280".to_string(), "3.7107".to_string())),
    );
    c.equal(
        "rotation keeps L for delta",
        markov::average_length(&g("delta"), &mu).ok().map(|l| l.to_string()),
        l_gamma.map(|l| l.to_string()),
    );

    for (idx, (name, f)) in goldens::all().into_iter().enumerate() {
        c.equal(
            format!("R({name})"),
            analysis::reachability(&f).members,
            REACHABLE[idx].to_vec(),
        );
    }
    for (name, want) in [("beta", false), ("gamma", true), ("kappa", true)] {
        c.equal(format!("{name} regular"), analysis::is_regular_structure(&g(name)), want);
    }
    for (name, want) in [("epsilon", vec![0]), ("eta", vec![]), ("gamma", vec![0])] {
        let f = g(name);
        c.equal(format!("M({name})"), analysis::m_set(&PrefixSets::new(&f)), want);
    }
    c.equal("kappa is AIFV", classes::is_aifv(&g("kappa")).0, true);
    c.equal("iota is not AIFV", classes::is_aifv(&g("iota")).0, false);
    let reports: Vec<_> = goldens::all().iter().map(|(_, f)| classes::classify_tuple(f)).collect();
    c.equal("class reports are nested", classes::verify_hierarchy(&reports), true);

    let delta = g("delta");
    match transforms::rotation_bits(&PrefixSets::new(&delta)) {
        Ok(d) => c.equal(
            "rotation bits of delta",
            (d[0].to_string(), d[2].to_string()),
            ("-".into(), "1".into()),
        ),
        Err(e) => c.add("rotation bits of delta", false, e.to_string()),
    }
    match transforms::rotate(&delta) {
        Ok(rot) => c.equal("rotated f2(a) of delta", rot.codeword(2, Symbol(0)).to_string(), "00".into()),
        Err(e) => c.add("rotated f2(a) of delta", false, e.to_string()),
    }
    for (from, to) in [("gamma", "delta"), ("delta", "epsilon"), ("epsilon", "epsilon"), ("zeta", "eta")] {
        let item = format!("rotate({from}) = {to}");
        match transforms::rotate(&g(from)) {
            Ok(t) => c.tuples(item, &t, &g(to)),
            Err(e) => c.add(item, false, e.to_string()),
        }
    }

    let eps = g("epsilon");
    for (i, s, chain, parts) in [(1, 3, "bacd", "- 00 111 11"), (0, 2, "ac", "01 00")] {
        let item = format!("epsilon gamma decomposition of f{i}({})", eps.alphabet().name(Symbol(s)));
        match transforms::gamma_decompose(&eps, i, Symbol(s)) {
            Ok(d) => {
                let got_parts: Vec<String> = d.parts.iter().map(|p| p.to_string()).collect();
                c.equal(item, (names(&eps, &d.chain), got_parts.join(" ")), (chain.into(), parts.into()));
            }
            Err(e) => c.add(item, false, e.to_string()),
        }
    }
    let ps_eps = PrefixSets::new(&eps);
    let a: Vec<_> = (0..3).map(|i| transforms::a_bit(&ps_eps, i).ok()).collect();
    c.equal("a bits of epsilon", a, vec![Some(true), Some(true), Some(false)]);
    match transforms::dot(&eps) {
        Ok(d) => {
            c.equal(
                "dotted f0(c) and f1(c) of epsilon",
                (d.codeword(0, Symbol(2)).to_string(), d.codeword(1, Symbol(2)).to_string()),
                ("1000".into(), "01001".into()),
            );
            c.tuples("dot(epsilon) = zeta", &d, &g("zeta"));
        }
        Err(e) => c.add("dot(epsilon) = zeta", false, e.to_string()),
    }
    match transforms::ddot(&g("eta")) {
        Ok(t) => {
            c.equal(
                "double-dotted f2(d) and f0(d) of eta",
                (t.codeword(2, Symbol(3)).to_string(), t.codeword(0, Symbol(3)).to_string()),
                ("111".into(), "001".into()),
            );
            c.tuples("ddot(eta) = theta", &t, &g("theta"));
        }
        Err(e) => c.add("ddot(eta) = theta", false, e.to_string()),
    }
    for (from, target, ops, to) in [
        ("gamma", Target::F1, vec!["rotate", "rotate"], "epsilon"),
        ("epsilon", Target::F2, vec!["dot", "rotate"], "eta"),
        ("eta", Target::F3, vec!["ddot"], "theta"),
    ] {
        let item = format!("chain {from} to {target:?} ends at {to}");
        match transforms::chain_to_class(&g(from), &mu, target) {
            Ok(t) => {
                let diff = t.result().differences(&g(to));
                let same_ops = t.ops() == ops;
                let detail = format!(
                    "ops {:?}, L kept at {}{}",
                    t.ops(),
                    t.length,
                    if diff.is_empty() { String::new() } else { format!("; differs at {}", diff.join("; ")) }
                );
                c.add(item, same_ops && diff.is_empty(), detail);
            }
            Err(e) => c.add(item, false, e.to_string()),
        }
    }
    match transforms::prune_to_reachable(&gamma) {
        Ok(p) => c.tuples("pruning gamma keeps gamma", &p, &gamma),
        Err(e) => c.add("pruning gamma keeps gamma", false, e.to_string()),
    }
    let single = CodeTuple::from_rows(&[&[("00", 0), ("01", 0), ("10", 0), ("11", 0)]]);
    match transforms::extend_to_two_tables(&single) {
        Ok(e) => c.equal(
            "second table for four symbols",
            e.table(1).iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            vec!["01".to_string(), "10".into(), "110".into(), "111".into()],
        ),
        Err(e) => c.add("second table for four symbols", false, e.to_string()),
    }
    let beta_trip = codec::roundtrip_check(&beta, 2, 200, 20, 1);
    c.add(
        "beta round trips fail",
        !beta_trip.passed(),
        format!("{} of {} trials failed", beta_trip.failures.len(), beta_trip.trials),
    );
    c.0
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The three reference values that disagree with the definitions they
    /// are stated to follow.
    #[test]
    fn only_the_known_discrepancies_fail() {
        let failed: Vec<String> = run().into_iter().filter(|c| !c.passed).map(|c| c.item).collect();
        assert_eq!(
            failed,
            [
                "beta class",
                "dot(epsilon) = zeta",
                "chain epsilon to F2 ends at eta",
            ]
        );
    }
}
