//! The ten worked code-tuples over `{a, b, c, d}` and their reference
//! prefix sets, reachability sets and class memberships.

use crate::dist::SourceDist;
use crate::tuple::CodeTuple;

type Rows = &'static [&'static [(&'static str, usize)]];

pub const NAMES: [&str; 10] = [
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
];

const ALPHA: Rows = &[
    &[("110", 0), ("-", 1), ("110", 2), ("111", 0)],
    &[("010", 0), ("011", 2), ("1", 2), ("10", 1)],
    &[("-", 2), ("-", 2), ("-", 2), ("-", 2)],
];
const BETA: Rows = &[
    &[("11", 1), ("-", 1), ("101", 2), ("1011", 1)],
    &[("0110", 1), ("0110", 1), ("01", 1), ("0111", 1)],
    &[("10", 2), ("11", 2), ("1000", 2), ("1001", 2)],
];
const GAMMA: Rows = &[
    &[("01", 0), ("10", 1), ("0100", 0), ("01", 2)],
    &[("00", 1), ("-", 0), ("00111", 1), ("00111", 2)],
    &[("1100", 1), ("1110", 0), ("111000", 2), ("110", 2)],
];
const DELTA: Rows = &[
    &[("01", 0), ("10", 1), ("0100", 0), ("011", 2)],
    &[("00", 1), ("-", 0), ("00111", 1), ("001111", 2)],
    &[("100", 1), ("110", 0), ("110001", 2), ("101", 2)],
];
const EPSILON: Rows = &[
    &[("01", 0), ("10", 1), ("0100", 0), ("0111", 2)],
    &[("00", 1), ("-", 0), ("00111", 1), ("0011111", 2)],
    &[("00", 1), ("10", 0), ("100011", 2), ("011", 2)],
];
const ZETA: Rows = &[
    &[("10", 0), ("11", 1), ("1000", 0), ("1001", 2)],
    &[("01", 1), ("-", 0), ("01001", 1), ("0100100", 2)],
    &[("00", 1), ("10", 0), ("100011", 2), ("011", 2)],
];
const ETA: Rows = &[
    &[("01", 0), ("1", 1), ("0001", 0), ("001", 2)],
    &[("01", 1), ("1", 0), ("01001", 1), ("0100100", 2)],
    &[("00", 1), ("101", 0), ("100011", 2), ("011", 2)],
];
const THETA: Rows = &[
    &[("01", 0), ("1", 1), ("0001", 0), ("001", 2)],
    &[("01", 1), ("1", 0), ("01001", 1), ("0100100", 2)],
    &[("10", 1), ("011", 0), ("010011", 2), ("111", 2)],
];
const IOTA: Rows = &[
    &[("01", 1), ("1", 1), ("0001", 0), ("001", 1)],
    &[("01", 1), ("1", 0), ("01001", 1), ("0100100", 1)],
];
const KAPPA: Rows = &[
    &[("100", 0), ("00", 0), ("01", 0), ("1", 1)],
    &[("1100", 0), ("11", 1), ("01", 0), ("10", 0)],
];

fn rows(name: &str) -> Option<Rows> {
    Some(match name {
        "alpha" => ALPHA,
        "beta" => BETA,
        "gamma" => GAMMA,
        "delta" => DELTA,
        "epsilon" => EPSILON,
        "zeta" => ZETA,
        "eta" => ETA,
        "theta" => THETA,
        "iota" => IOTA,
        "kappa" => KAPPA,
        _ => return None,
    })
}

pub fn lookup(name: &str) -> Option<CodeTuple> {
    rows(name).map(CodeTuple::from_rows)
}

/// Panics on an unknown name.
pub fn tuple(name: &str) -> CodeTuple {
    lookup(name).unwrap_or_else(|| panic!("no built-in code-tuple named {name:?}"))
}

pub fn all() -> Vec<(&'static str, CodeTuple)> {
    NAMES.iter().map(|&n| (n, tuple(n))).collect()
}

/// `μ = (0.1, 0.2, 0.3, 0.4)` over `a, b, c, d`.
pub fn example_dist() -> SourceDist {
    SourceDist::from_ratios(&[(1, 10), (2, 10), (3, 10), (4, 10)]).expect("valid")
}

/// Reference `P^1_{F,i}` and `P^2_{F,i}` per table, as set literals.
pub struct PrefixRow {
    pub name: &'static str,
    pub p1: &'static [&'static str],
    pub p2: &'static [&'static str],
    /// The reference class column, verbatim.
    pub class: &'static str,
}

pub const PREFIX_TABLE: [PrefixRow; 10] = [
    PrefixRow { name: "alpha", p1: &["{0,1}", "{0,1}", "{}"], p2: &["{01,10,11}", "{01,10}", "{}"], class: "F_2dec \\ F_0" },
    PrefixRow { name: "beta", p1: &["{0,1}", "{0}", "{1}"], p2: &["{01,10,11}", "{01}", "{10,11}"], class: "F_reg \\ F_0" },
    PrefixRow { name: "gamma", p1: &["{0,1}", "{0,1}", "{1}"], p2: &["{01,10}", "{00,01,10}", "{11}"], class: "F_0 \\ F_1" },
    PrefixRow { name: "delta", p1: &["{0,1}", "{0,1}", "{1}"], p2: &["{01,10}", "{00,01,10}", "{10,11}"], class: "F_0 \\ F_1" },
    PrefixRow { name: "epsilon", p1: &["{0,1}", "{0,1}", "{0,1}"], p2: &["{01,10}", "{00,01,10}", "{00,01,10}"], class: "F_1 \\ F_2" },
    PrefixRow { name: "zeta", p1: &["{1}", "{0,1}", "{0,1}"], p2: &["{10,11}", "{01,10,11}", "{00,01,10}"], class: "F_0 \\ F_1" },
    PrefixRow { name: "eta", p1: &["{0,1}", "{0,1}", "{0,1}"], p2: &["{00,01,10,11}", "{01,10,11}", "{00,01,10}"], class: "F_2 \\ F_3" },
    PrefixRow { name: "theta", p1: &["{0,1}", "{0,1}", "{0,1}"], p2: &["{00,01,10,11}", "{01,10,11}", "{01,10,11}"], class: "F_3 \\ F_4" },
    PrefixRow { name: "iota", p1: &["{0,1}", "{0,1}"], p2: &["{00,01,10,11}", "{01,10,11}"], class: "F_4 \\ F_AIFV" },
    PrefixRow { name: "kappa", p1: &["{0,1}", "{0,1}"], p2: &["{00,01,10,11}", "{01,10,11}"], class: "F_AIFV" },
];

/// Reference `P̄^2_{F,i}(f_i(s))` for the `gamma` tuple, indexed `[symbol][table]`.
pub const GAMMA_STRICT_SETS: [[&str; 3]; 4] = [
    ["{00}", "{11}", "{}"],
    ["{}", "{00}", "{00}"],
    ["{}", "{}", "{}"],
    ["{00}", "{}", "{00,01}"],
];

/// Reference reachability sets, in `NAMES` order.
pub const REACHABLE: [&[usize]; 10] = [
    &[2],
    &[],
    &[0, 1, 2],
    &[0, 1, 2],
    &[0, 1, 2],
    &[0, 1, 2],
    &[0, 1, 2],
    &[0, 1, 2],
    &[0, 1],
    &[0, 1],
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves_and_round_trips() {
        for (name, f) in all() {
            assert_eq!(CodeTuple::parse(&f.serialize()).unwrap(), f, "{name}");
            assert_eq!(f.sigma(), 4);
        }
        assert!(lookup("omega").is_none());
        assert_eq!(tuple("iota").num_tables(), 2);
        assert_eq!(tuple("alpha").table(2).iter().filter(|c| c.is_empty()).count(), 4);
    }
}
