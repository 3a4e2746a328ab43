//! Transition matrix, stationary distribution and average codeword length,
//! all in exact rational arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dist::SourceDist;
use crate::error::{Error, Result};
use crate::tuple::CodeTuple;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub entries: Vec<Vec<BigRational>>,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|q| q.to_string()).collect();
            writeln!(f, "Q[{i}] = [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `Q_{ij} = Σ_{s: τ_i(s) = j} μ(s)`.
pub fn transition_matrix(f: &CodeTuple, mu: &SourceDist) -> Result<TransitionMatrix> {
    let probs = mu.aligned_to(f.alphabet())?;
    let m = f.num_tables();
    let mut entries = vec![vec![BigRational::zero(); m]; m];
    for i in f.tables() {
        for s in f.symbols() {
            entries[i][f.next(i, s)] += &probs[s.0];
        }
    }
    Ok(TransitionMatrix { entries })
}

/// The equations `π(Q − I) = 0`, `Σπ = 1` as integer rows `[a_0 .. a_{m-1} | rhs]`.
fn stationary_system(q: &TransitionMatrix) -> Vec<Vec<BigInt>> {
    let m = q.size();
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..m).map(|i| q.get(i, j).clone()).collect();
            row[j] -= BigRational::one();
            row.push(BigRational::zero());
            row
        })
        .collect();
    rows.push(vec![BigRational::one(); m + 1]);
    rows.into_iter()
        .map(|row| {
            let denom = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&denom / x.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) elimination of the first `cols` columns in place.
/// Returns the pivot column of each pivot row, in row order.
fn bareiss(rows: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&p| !rows[p][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for below in r + 1..rows.len() {
            for col in (0..rows[below].len()).rev() {
                let v = &rows[r][c] * &rows[below][col] - &rows[below][c] * &rows[r][col];
                rows[below][col] = v / &prev;
            }
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Whether the stationary equations pin down a single solution.
pub fn stationary_rank_is_full(q: &TransitionMatrix) -> bool {
    let mut rows = stationary_system(q);
    bareiss(&mut rows, q.size()).len() == q.size()
}

/// Exact `π(F)`; fails with `NotRegular` unless the solution is unique.
pub fn stationary(f: &CodeTuple, mu: &SourceDist) -> Result<Vec<BigRational>> {
    let q = transition_matrix(f, mu)?;
    solve_stationary(&q)
}

pub fn solve_stationary(q: &TransitionMatrix) -> Result<Vec<BigRational>> {
    let m = q.size();
    let mut rows = stationary_system(q);
    let pivots = bareiss(&mut rows, m);
    if pivots.len() != m {
        return Err(Error::NotRegular);
    }
    let mut pi = vec![BigRational::zero(); m];
    for r in (0..m).rev() {
        let mut acc = BigRational::from_integer(rows[r][m].clone());
        for c in r + 1..m {
            acc -= BigRational::from_integer(rows[r][c].clone()) * &pi[c];
        }
        pi[r] = acc / BigRational::from_integer(rows[r][r].clone());
    }
    debug_assert!(is_stationary(q, &pi));
    Ok(pi)
}

/// `πQ = π` and `Σπ = 1`, exactly.
pub fn is_stationary(q: &TransitionMatrix, pi: &[BigRational]) -> bool {
    let m = q.size();
    let total: BigRational = pi.iter().sum();
    total.is_one()
        && (0..m).all(|j| {
            let flow: BigRational = (0..m).map(|i| &pi[i] * q.get(i, j)).sum();
            flow == pi[j]
        })
}

/// `L_i(F) = Σ_s |f_i(s)| μ(s)`.
pub fn table_length(f: &CodeTuple, i: usize, mu: &SourceDist) -> Result<BigRational> {
    f.check_table(i)?;
    let probs = mu.aligned_to(f.alphabet())?;
    Ok(f.symbols()
        .map(|s| &probs[s.0] * BigInt::from(f.codeword(i, s).len()))
        .sum())
}

/// `L(F) = Σ_i π_i(F) L_i(F)`.
pub fn average_length(f: &CodeTuple, mu: &SourceDist) -> Result<BigRational> {
    let pi = stationary(f, mu)?;
    let mut total = BigRational::zero();
    for (i, p) in pi.iter().enumerate() {
        total += p * table_length(f, i, mu)?;
    }
    Ok(total)
}

/// Decimal rendering rounded half-to-even at `places` digits, computed exactly.
pub fn round_half_even(x: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = x.abs() * BigRational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let frac = &scaled - BigRational::from_integer(floor.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rounded = if frac > half || (frac == half && floor.is_odd()) {
        floor + 1
    } else {
        floor
    };
    let (int, rest) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !(int.is_zero() && rest.is_zero()) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", rest.to_string(), width = places)
}
