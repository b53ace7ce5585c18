//! Permutation mutation operators.
//!
//! Positions are 0-based and position 0 (the start city) is never touched, so
//! every operator maps a valid tour to a valid tour.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::seed::Rng;
use crate::tour::Tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    /// Reverse the segment between two positions (a 2-opt move).
    Inversion,
    /// Swap the cities at two positions.
    Exchange,
    /// Move the city at one position to another, shifting the cities between.
    Jump,
}

impl Operator {
    pub const ALL: [Operator; 3] = [Operator::Inversion, Operator::Exchange, Operator::Jump];

    pub fn as_str(self) -> &'static str {
        match self {
            Operator::Inversion => "inversion",
            Operator::Exchange => "exchange",
            Operator::Jump => "jump",
        }
    }

    /// Applies the operator in place. Positions must already be validated.
    #[inline]
    pub(crate) fn apply(self, perm: &mut [usize], i: usize, j: usize) {
        match self {
            Operator::Inversion => perm[i.min(j)..=i.max(j)].reverse(),
            Operator::Exchange => perm.swap(i, j),
            Operator::Jump if i < j => perm[i..=j].rotate_left(1),
            Operator::Jump => perm[j..=i].rotate_right(1),
        }
    }

    /// Samples positions and mutates `perm` in place.
    pub(crate) fn mutate(self, perm: &mut [usize], rng: &mut Rng) -> Result<()> {
        let (i, j) = sample_positions(rng, perm.len())?;
        self.apply(perm, i, j);
        Ok(())
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "inversion" | "inv" => Ok(Operator::Inversion),
            "exchange" | "swap" => Ok(Operator::Exchange),
            "jump" => Ok(Operator::Jump),
            other => Err(Error::validation(format!(
                "unknown operator {other:?} (expected inversion, exchange or jump)"
            ))),
        }
    }
}

/// Two distinct positions drawn uniformly from `1..n`, in draw order.
pub fn sample_positions(rng: &mut Rng, n: usize) -> Result<(usize, usize)> {
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "mutation needs at least 3 cities, instance has {n}"
        )));
    }
    let i = rng.gen_range(1..n);
    let mut j = rng.gen_range(1..n - 1);
    if j >= i {
        j += 1;
    }
    Ok((i, j))
}

fn check_positions(t: &Tour, i: usize, j: usize) -> Result<()> {
    let n = t.len();
    for p in [i, j] {
        if p == 0 || p >= n {
            return Err(Error::contract(format!(
                "mutation position {p} outside 1..{n} (position 0 is fixed)"
            )));
        }
    }
    if i == j {
        return Err(Error::contract(format!("mutation positions must differ, got {i} twice")));
    }
    Ok(())
}

fn applied(op: Operator, t: &Tour, i: usize, j: usize) -> Tour {
    let mut out = t.clone();
    op.apply(out.cities_mut(), i, j);
    out
}

/// Reverses positions `i..=j`; requires `1 <= i < j < n`.
pub fn inversion(t: &Tour, i: usize, j: usize) -> Result<Tour> {
    check_positions(t, i, j)?;
    if i > j {
        return Err(Error::contract(format!("inversion needs i < j, got ({i}, {j})")));
    }
    Ok(applied(Operator::Inversion, t, i, j))
}

/// Swaps positions `i` and `j`.
pub fn exchange(t: &Tour, i: usize, j: usize) -> Result<Tour> {
    check_positions(t, i, j)?;
    Ok(applied(Operator::Exchange, t, i, j))
}

/// Removes the city at `i` and reinserts it so that it lands at `j`.
pub fn jump(t: &Tour, i: usize, j: usize) -> Result<Tour> {
    check_positions(t, i, j)?;
    Ok(applied(Operator::Jump, t, i, j))
}
