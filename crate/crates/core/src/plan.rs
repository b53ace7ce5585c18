use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Active/inactive status of every item; bit `k` belongs to item `k` in file order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PackingPlan {
    bits: Vec<bool>,
}

impl PackingPlan {
    pub fn new(bits: Vec<bool>) -> Self {
        PackingPlan { bits }
    }

    pub fn all_active(m: usize) -> Self {
        PackingPlan { bits: vec![true; m] }
    }

    pub fn all_inactive(m: usize) -> Self {
        PackingPlan { bits: vec![false; m] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_active(&self, item: usize) -> bool {
        self.bits[item]
    }

    /// Number of active items, `|x|_1`.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Number of inactive items, `|x|_0`.
    pub fn zeros(&self) -> usize {
        self.len() - self.ones()
    }

    pub fn hamming(&self, other: &PackingPlan) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::contract(format!(
                "hamming distance of plans with lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count())
    }

    pub(crate) fn ensure_len(&self, m: usize) -> Result<()> {
        if self.len() != m {
            return Err(Error::contract(format!(
                "packing plan has {} bits but instance has {m} items",
                self.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PackingPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for PackingPlan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::validation(format!("invalid plan character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PackingPlan::new)
    }
}
