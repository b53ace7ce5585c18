use std::fmt;

use crate::error::{Error, Result};

/// A permutation of the cities that starts at city 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    perm: Vec<usize>,
}

impl Tour {
    /// Validates `perm` as a permutation of `0..perm.len()` with `perm[0] == 0`.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        if n == 0 {
            return Err(Error::contract("empty tour"));
        }
        if perm[0] != 0 {
            return Err(Error::contract(format!(
                "tour must start at city 1, starts at city {}",
                perm[0] + 1
            )));
        }
        let mut seen = vec![false; n];
        for &c in &perm {
            if c >= n || seen[c] {
                return Err(Error::contract(format!("tour is not a permutation of 1..={n}")));
            }
            seen[c] = true;
        }
        Ok(Tour { perm })
    }

    /// The tour `0, 1, ..., n-1`.
    pub fn identity(n: usize) -> Self {
        Tour { perm: (0..n).collect() }
    }

    /// Parses 1-based city ids, as written in run files.
    pub fn from_one_based(ids: &[usize]) -> Result<Self> {
        let perm = ids
            .iter()
            .map(|&c| c.checked_sub(1).ok_or_else(|| Error::contract("city id 0 in 1-based tour")))
            .collect::<Result<Vec<_>>>()?;
        Tour::new(perm)
    }

    pub(crate) fn from_vec_unchecked(perm: Vec<usize>) -> Self {
        debug_assert!(Tour::new(perm.clone()).is_ok());
        Tour { perm }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn cities(&self) -> &[usize] {
        &self.perm
    }

    pub(crate) fn cities_mut(&mut self) -> &mut [usize] {
        &mut self.perm
    }

    /// Exchanges the city buffer with `buf`, which must hold a valid tour of the same length.
    pub(crate) fn swap_cities(&mut self, buf: &mut Vec<usize>) {
        debug_assert_eq!(buf.len(), self.perm.len());
        std::mem::swap(&mut self.perm, buf);
    }

    /// Position of every city: `positions()[city] = index in the tour`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.perm.len()];
        for (p, &c) in self.perm.iter().enumerate() {
            pos[c] = p;
        }
        pos
    }

    /// Undirected edges including the closing edge, each as `(min, max)`.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.perm.len();
        (0..n).map(move |k| {
            let a = self.perm[k];
            let b = self.perm[(k + 1) % n];
            (a.min(b), a.max(b))
        })
    }
}

/// Space-separated 1-based city ids.
impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.perm.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", c + 1)?;
        }
        Ok(())
    }
}
