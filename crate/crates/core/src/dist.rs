use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, ParseError, Result};

/// Largest denominator produced when a probability arrives as an `f64`.
pub const FLOAT_DENOMINATOR_LIMIT: i64 = 1_000_000;

/// Sum tolerance for the `f64` entry path before exact renormalization.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

/// A source distribution with exact rational probabilities.
///
/// A distribution read from a file carries symbol names and is matched to a
/// code-tuple by name; one built from bare values is matched by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDist {
    names: Option<Arc<Alphabet>>,
    probs: Vec<BigRational>,
}

impl SourceDist {
    /// Every probability must be positive and the total exactly one.
    pub fn new(probs: Vec<BigRational>) -> Result<Self> {
        validate(&probs)?;
        Ok(SourceDist { names: None, probs })
    }

    pub fn with_names(alphabet: Arc<Alphabet>, probs: Vec<BigRational>) -> Result<Self> {
        if alphabet.len() != probs.len() {
            return Err(Error::AlphabetMismatch {
                tuple: alphabet.len(),
                dist: probs.len(),
            });
        }
        validate(&probs)?;
        Ok(SourceDist {
            names: Some(alphabet),
            probs,
        })
    }

    /// Builds from `(numerator, denominator)` pairs.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Result<Self> {
        let probs = pairs
            .iter()
            .map(|&(p, q)| {
                if q == 0 {
                    Err(Error::InvalidDistribution("zero denominator".into()))
                } else {
                    Ok(BigRational::new(p.into(), q.into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SourceDist::new(probs)
    }

    /// Parses each entry as an exact decimal or `p/q` (so `"0.1"` is exactly 1/10).
    pub fn from_decimals(values: &[&str]) -> Result<Self> {
        let probs = values
            .iter()
            .map(|v| parse_probability(v, 0))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        SourceDist::new(probs)
    }

    /// Floating-point entry: each value is replaced by its best rational
    /// approximation with denominator at most 10^6, the approximations must
    /// sum to one within 1e-12, and the result is rescaled to sum exactly to one.
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidDistribution(
                "probabilities must be finite and positive".into(),
            ));
        }
        let approx: Vec<BigRational> = values
            .iter()
            .map(|&v| best_rational(v, FLOAT_DENOMINATOR_LIMIT))
            .collect();
        let total: BigRational = approx.iter().sum();
        let deviation = (&total - BigRational::one()).abs().to_f64().unwrap_or(f64::INFINITY);
        if deviation > FLOAT_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {} (off by {deviation:e})",
                total.to_f64().unwrap_or(f64::NAN)
            )));
        }
        SourceDist::new(approx.into_iter().map(|p| p / &total).collect())
    }

    /// `probs[i] = 1/σ`.
    pub fn uniform(sigma: usize) -> Self {
        let p = BigRational::new(BigInt::one(), BigInt::from(sigma));
        SourceDist::new(vec![p; sigma]).expect("uniform distribution is valid")
    }

    /// Reads the distribution file format: `symbol probability` per line.
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let mut names = Vec::new();
        let mut probs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(ParseError::syntax(
                    line,
                    format!("expected 'symbol probability', got {content:?}"),
                ));
            }
            if names.iter().any(|n: &String| n == tokens[0]) {
                return Err(ParseError::semantic(
                    line,
                    format!("duplicate symbol {:?}", tokens[0]),
                ));
            }
            let p = parse_probability(tokens[1], line)?;
            if !p.is_positive() {
                return Err(ParseError::semantic(
                    line,
                    format!("probability of {:?} must be positive", tokens[0]),
                ));
            }
            names.push(tokens[0].to_string());
            probs.push(p);
        }
        let alphabet = Alphabet::new(names)?;
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(ParseError::semantic(
                0,
                format!("probabilities sum to {total}, not 1"),
            ));
        }
        Ok(SourceDist {
            names: Some(Arc::new(alphabet)),
            probs,
        })
    }

    /// σ.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn names(&self) -> Option<&Alphabet> {
        self.names.as_deref()
    }

    pub fn prob(&self, s: Symbol) -> &BigRational {
        &self.probs[s.0]
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    /// Probabilities listed in the order of `alphabet`, matching by name when
    /// this distribution is named.
    pub fn aligned_to(&self, alphabet: &Alphabet) -> Result<Vec<BigRational>> {
        let mismatch = || Error::AlphabetMismatch {
            tuple: alphabet.len(),
            dist: self.len(),
        };
        if alphabet.len() != self.len() {
            return Err(mismatch());
        }
        match &self.names {
            None => Ok(self.probs.clone()),
            Some(own) => alphabet
                .names()
                .iter()
                .map(|n| own.lookup(n).map(|s| self.probs[s.0].clone()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(mismatch),
        }
    }

    /// Common denominator `D` and integer weights `w_s = μ(s)·D`.
    pub fn integer_weights(&self) -> (BigInt, Vec<BigInt>) {
        let denom = self
            .probs
            .iter()
            .fold(BigInt::one(), |acc, p| num_integer::lcm(acc, p.denom().clone()));
        let weights = self
            .probs
            .iter()
            .map(|p| p.numer() * (&denom / p.denom()))
            .collect();
        (denom, weights)
    }
}

impl fmt::Display for SourceDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match &self.names {
                Some(a) => write!(f, "{}={}", a.name(Symbol(i)), p)?,
                None => write!(f, "{p}")?,
            }
        }
        Ok(())
    }
}

fn validate(probs: &[BigRational]) -> Result<()> {
    if probs.len() < 2 {
        return Err(Error::InvalidDistribution(
            "need at least two symbols".into(),
        ));
    }
    if let Some(p) = probs.iter().find(|p| !p.is_positive()) {
        return Err(Error::InvalidDistribution(format!(
            "probability {p} is not positive"
        )));
    }
    let total: BigRational = probs.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidDistribution(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    Ok(())
}

/// Exact value of `123`, `0.25`, `.5` or `3/8`.
fn parse_probability(token: &str, line: usize) -> std::result::Result<BigRational, ParseError> {
    let bad = || ParseError::syntax(line, format!("invalid probability {token:?}"));
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
    if let Some((p, q)) = token.split_once('/') {
        if !digits(p) || !digits(q) {
            return Err(bad());
        }
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(ParseError::semantic(line, "zero denominator"));
        }
        return Ok(BigRational::new(p.parse().map_err(|_| bad())?, q));
    }
    let (int, frac) = token.split_once('.').unwrap_or((token, ""));
    if (int.is_empty() && frac.is_empty())
        || !(int.is_empty() || digits(int))
        || !(frac.is_empty() || digits(frac))
    {
        return Err(bad());
    }
    let numer: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(numer, denom))
}

/// Closest fraction to `x` with denominator at most `limit`, by continued
/// fractions with a final semiconvergent check.
fn best_rational(x: f64, limit: i64) -> BigRational {
    let exact = BigRational::from_float(x).expect("finite value");
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    let limit = BigInt::from(limit);
    loop {
        let a = rest.floor().to_integer();
        let q2 = &a * &q1 + &q0;
        if q2 > limit {
            // Largest semiconvergent that still fits, compared with the last convergent.
            let t = (&limit - &q0) / &q1;
            let semi = BigRational::new(&t * &p1 + &p0, &t * &q1 + &q0);
            let conv = BigRational::new(p1.clone(), q1.clone());
            return if (&semi - &exact).abs() < (&conv - &exact).abs() {
                semi
            } else {
                conv
            };
        }
        let p2 = &a * &p1 + &p0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return BigRational::new(p1, q1);
        }
        rest = frac.recip();
    }
}
