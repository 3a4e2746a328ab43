//! Independent oracles and randomized invariants for the core library.

use std::sync::Arc;

use aifv_core::alphabet::{Alphabet, SourceSeq, Symbol};
use aifv_core::analysis;
use aifv_core::bits::BitSeq;
use aifv_core::classes::{self, Class};
use aifv_core::codec;
use aifv_core::markov;
use aifv_core::prefix_sets::{self, PrefixSets};
use aifv_core::search::{self, Filter, SearchSpace};
use aifv_core::transforms;
use aifv_core::{CodeTuple, SourceDist};
use num_rational::BigRational;
use proptest::prelude::*;

mod common;
use common::{oracle_set, probes, to_vecs, tuples, two_bit_decodable_and_extendable};

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn prefix_sets_match_the_walk_oracle(f in tuples(3)) {
        let ps = PrefixSets::new(&f);
        for i in f.tables() {
            for b in probes(&f, i) {
                let bs = BitSeq::from_bits(b.iter().copied());
                for k in 0..=3 {
                    prop_assert_eq!(to_vecs(&ps.p_set(i, &bs, k)), oracle_set(&f, i, &b, k, false));
                    prop_assert_eq!(to_vecs(&ps.p_bar_set(i, &bs, k)), oracle_set(&f, i, &b, k, true));
                }
            }
        }
    }

    #[test]
    fn prefix_set_split_identities(f in tuples(3)) {
        let ps = PrefixSets::new(&f);
        for i in f.tables() {
            for b in probes(&f, i) {
                let bs = BitSeq::from_bits(b.iter().copied());
                let owners = prefix_sets::symbols_with_codeword(&f, i, &bs);
                for k in 0..=3 {
                    let full = ps.p_set(i, &bs, k);
                    let strict = ps.p_bar_set(i, &bs, k);
                    let mut union = strict.clone();
                    for &s in &owners {
                        union.extend(ps.base(f.next(i, s), k));
                    }
                    prop_assert_eq!(&full, &union);
                    if analysis::decodability(&ps, k).decodable() {
                        let total: usize = strict.len()
                            + owners.iter().map(|&s| ps.base(f.next(i, s), k).len()).sum::<usize>();
                        prop_assert_eq!(full.len(), total);
                    }
                    if k >= 1 {
                        let mut split = prefix_sets::BitSet::new();
                        for bit in [false, true] {
                            let mut longer = b.clone();
                            longer.push(bit);
                            let head = BitSeq::from_bits([bit]);
                            let rest = ps.p_set(i, &BitSeq::from_bits(longer), k - 1);
                            split.extend(rest.iter().map(|c| head.concat(c)));
                        }
                        prop_assert_eq!(&strict, &split);
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_shifts_every_encoding(f in tuples(3), xs in proptest::collection::vec(0usize..3, 0..12), start in 0usize..3) {
        prop_assume!(analysis::is_extendable(&f));
        let i = start % f.num_tables();
        let x: SourceSeq = xs.iter().map(|&s| Symbol(s % f.sigma())).collect();
        let ps = PrefixSets::new(&f);
        let d = transforms::rotation_bits(&ps).unwrap();
        let hat = transforms::rotate(&f).unwrap();
        let (plain, end) = prefix_sets::f_star(&f, i, &x);
        let (rotated, hat_end) = prefix_sets::f_star(&hat, i, &x);
        prop_assert_eq!(end, hat_end);
        prop_assert_eq!(d[i].concat(&rotated), plain.concat(&d[end]));
        prop_assert!(analysis::is_extendable(&hat));
    }

    #[test]
    fn rotation_preserves_decodability_and_length(f in tuples(3)) {
        prop_assume!(analysis::is_extendable(&f));
        let hat = transforms::rotate(&f).unwrap();
        for k in 0..=2 {
            if analysis::is_k_bit_delay_decodable(&f, k).decodable() {
                prop_assert!(analysis::is_k_bit_delay_decodable(&hat, k).decodable());
            }
        }
        if analysis::is_regular_structure(&f) {
            let mu = SourceDist::uniform(f.sigma());
            prop_assert_eq!(markov::average_length(&f, &mu).unwrap(), markov::average_length(&hat, &mu).unwrap());
        }
    }

    #[test]
    fn longer_lookahead_truncates_to_shorter(f in tuples(3)) {
        prop_assume!(analysis::is_extendable(&f));
        let ps = PrefixSets::new(&f);
        for i in f.tables() {
            for k in 0..3 {
                let cut: prefix_sets::BitSet = ps.base(i, k + 1).iter().map(|c| c.take(k)).collect();
                prop_assert_eq!(cut, ps.base(i, k));
            }
        }
    }

    #[test]
    fn class_reports_are_nested(f in tuples(3)) {
        prop_assert!(classes::verify_hierarchy(&[classes::classify_tuple(&f)]));
    }

    #[test]
    fn fast_search_predicates_match_the_classifier(f in tuples(2)) {
        let report = classes::classify_tuple(&f);
        prop_assert_eq!(search::fast_in_f0(&f), report.holds(Class::F0));
        if f.num_tables() == 2 {
            let fast = search::aifv_table_condition(&f, 0) && search::aifv_table_condition(&f, 1);
            prop_assert_eq!(fast, report.holds(Class::Aifv));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        max_global_rejects: 20_000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn empty_encodings_are_short(f in tuples(3)) {
        prop_assume!(two_bit_decodable_and_extendable(&f));
        // Longest run of empty codewords from any table.
        let f = &f;
        let m = f.num_tables();
        let mut frontier: Vec<usize> = f.tables().collect();
        let mut steps = 0;
        while !frontier.is_empty() && steps <= m {
            frontier = frontier
                .iter()
                .flat_map(|&t| f.symbols().filter(move |&s| f.codeword(t, s).is_empty()).map(move |s| (t, s)))
                .map(|(t, s)| f.next(t, s))
                .collect();
            steps += 1;
        }
        prop_assert!(steps <= m, "an all-empty source sequence of length {} exists", steps);
    }

    #[test]
    fn decodable_tuples_round_trip(f in tuples(3), seed in any::<u64>()) {
        prop_assume!(two_bit_decodable_and_extendable(&f));
        let report = codec::roundtrip_check(&f, 2, 20, 15, seed);
        prop_assert!(report.passed(), "{:?}", report.failures.first());
        prop_assert!(report.max_delay <= 2);
    }

    #[test]
    fn tuple_text_round_trips(f in tuples(3)) {
        prop_assert_eq!(CodeTuple::parse(&f.serialize()).unwrap(), f);
    }
}

/// Minimum over `F_0` by classifying every tuple with the general library.
fn library_minimum(sigma: usize, max_tables: usize, max_len: usize, mu: &SourceDist) -> BigRational {
    let words: Vec<BitSeq> = (0..=max_len)
        .flat_map(|len| (0..1u64 << len).map(move |v| BitSeq::from_u64(v, len)))
        .collect();
    let alphabet = Arc::new(Alphabet::letters(sigma));
    let mut best: Option<BigRational> = None;
    for m in 1..=max_tables {
        let per_slot = words.len() * m;
        let slots = sigma * m;
        for code in 0..per_slot.pow(slots as u32) {
            let mut c = code;
            let mut digits = vec![0; slots];
            for d in digits.iter_mut().rev() {
                *d = c % per_slot;
                c /= per_slot;
            }
            let codewords = digits
                .chunks(sigma)
                .map(|row| row.iter().map(|d| words[d / m].clone()).collect())
                .collect();
            let next = digits.chunks(sigma).map(|row| row.iter().map(|d| d % m).collect()).collect();
            let f = CodeTuple::new(alphabet.clone(), codewords, next).unwrap();
            if !analysis::is_regular_structure(&f) {
                continue;
            }
            if classes::classify_tuple(&f).holds(Class::F0) {
                let l = markov::average_length(&f, mu).unwrap();
                if best.as_ref().is_none_or(|b| &l < b) {
                    best = Some(l);
                }
            }
        }
    }
    best.expect("the space contains a prefix code")
}

#[test]
fn search_minimum_matches_full_classification() {
    for ratios in [[(1, 2), (1, 2)], [(9, 10), (1, 10)], [(3, 4), (1, 4)]] {
        let mu = SourceDist::from_ratios(&ratios).unwrap();
        let fast = search::enumerate_min(&SearchSpace::new(2, 2, 2, Filter::F0), &mu).unwrap();
        assert_eq!(fast.length, library_minimum(2, 2, 2, &mu), "{ratios:?}");
        assert_eq!(Some(fast.examined), fast.space.size());
    }
}

#[test]
fn search_results_are_deterministic() {
    let mu = SourceDist::from_ratios(&[(3, 4), (1, 4)]).unwrap();
    let space = SearchSpace::new(2, 2, 3, Filter::F0);
    assert_eq!(search::enumerate_min(&space, &mu).unwrap(), search::enumerate_min(&space, &mu).unwrap());
}

#[test]
fn huffman_matches_a_hand_merge() {
    // (0.1 + 0.2) → 0.3, (0.3 + 0.3) → 0.6, (0.6 + 0.4) → 1: depths 3, 3, 2, 1.
    let mu = SourceDist::from_ratios(&[(1, 10), (2, 10), (3, 10), (4, 10)]).unwrap();
    let (lengths, l) = search::huffman_length(&mu);
    assert_eq!(lengths, [3, 3, 2, 1]);
    let hand = BigRational::new(3.into(), 10.into()) * BigRational::from_integer(3.into())
        + BigRational::new(3.into(), 10.into()) * BigRational::from_integer(2.into())
        + BigRational::new(4.into(), 10.into());
    assert_eq!(l, hand);
}
