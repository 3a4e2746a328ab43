//! Finite binary sequences with the prefix order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// Textual form of the empty sequence in every file format and report.
pub const LAMBDA_TOKEN: &str = "-";

/// A finite sequence over `{0, 1}`. The empty sequence plays the role of λ.
///
/// Ordering is length first, then lexicographic, which is the order used
/// for printing sets and for canonical enumeration.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSeq {
    bits: Vec<bool>,
}

impl BitSeq {
    pub fn empty() -> Self {
        BitSeq { bits: Vec::new() }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        BitSeq {
            bits: bits.into_iter().collect(),
        }
    }

    /// The `len` low bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        BitSeq::from_bits((0..len).rev().map(|i| (value >> i) & 1 == 1))
    }

    /// `n` copies of `bit`.
    pub fn repeat(bit: bool, n: usize) -> Self {
        BitSeq { bits: vec![bit; n] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitSeq) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitSeq) -> BitSeq {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &BitSeq) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// `self ≺ other`.
    pub fn is_strict_prefix_of(&self, other: &BitSeq) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    /// The first `k` bits; the whole sequence when it is shorter.
    pub fn take(&self, k: usize) -> BitSeq {
        BitSeq {
            bits: self.bits[..k.min(self.len())].to_vec(),
        }
    }

    /// Bits from position `from` onward.
    pub fn skip(&self, from: usize) -> BitSeq {
        BitSeq {
            bits: self.bits[from.min(self.len())..].to_vec(),
        }
    }

    /// `z` such that `self = prefix · z`, if `prefix ⪯ self`.
    pub fn strip_prefix(&self, prefix: &BitSeq) -> Option<BitSeq> {
        self.bits.strip_prefix(prefix.bits.as_slice()).map(|rest| BitSeq {
            bits: rest.to_vec(),
        })
    }

    /// Drops the last bit. Undefined on λ.
    pub fn pref(&self) -> Option<BitSeq> {
        (!self.is_empty()).then(|| BitSeq {
            bits: self.bits[..self.len() - 1].to_vec(),
        })
    }

    /// Drops the first bit. Undefined on λ.
    pub fn suff(&self) -> Option<BitSeq> {
        (!self.is_empty()).then(|| BitSeq {
            bits: self.bits[1..].to_vec(),
        })
    }

    /// Every sequence of length `k` in lexicographic order.
    pub fn all_of_len(k: usize) -> impl Iterator<Item = BitSeq> {
        assert!(k < 64, "length {k} too large to enumerate");
        (0..1u64 << k).map(move |v| BitSeq::from_u64(v, k))
    }
}

impl Ord for BitSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str(LAMBDA_TOKEN);
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSeq({self})")
    }
}

impl FromStr for BitSeq {
    type Err = ParseError;

    /// Accepts ASCII `0`/`1` strings, or `-` for λ. The empty string is rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == LAMBDA_TOKEN {
            return Ok(BitSeq::empty());
        }
        if s.is_empty() {
            return Err(ParseError::syntax(0, "empty bit string (use '-' for lambda)"));
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ParseError::syntax(0, format!("invalid bit {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|bits| BitSeq { bits })
    }
}

/// Renders a set of sequences as `{01,10}`; the empty set is `{}`.
pub fn format_set<'a>(set: impl IntoIterator<Item = &'a BitSeq>) -> String {
    let items: Vec<String> = set.into_iter().map(|b| b.to_string()).collect();
    format!("{{{}}}", items.join(","))
}
