//! Static W-TSP instances: cities, distances and the items homed at each city.
//!
//! Cities are 0-based in the API (`0` is the fixed start city). File formats and
//! CLI output use the 1-based ids of the TTP benchmark files.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Distance convention for coordinates, following TSPLIB.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Euclidean distance rounded to the nearest integer.
    Euc2d,
    /// Euclidean distance rounded up.
    Ceil2d,
    /// Full distance matrix supplied by the caller.
    Explicit,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Euc2d => "EUC_2D",
            Metric::Ceil2d => "CEIL_2D",
            Metric::Explicit => "EXPLICIT",
        }
    }

    fn between(self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let d = (a.0 - b.0).hypot(a.1 - b.1);
        match self {
            // TSPLIB nint: (int)(d + 0.5)
            Metric::Euc2d => (d + 0.5).floor(),
            Metric::Ceil2d => d.ceil(),
            Metric::Explicit => unreachable!("explicit instances carry a matrix"),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "EUC_2D" => Ok(Metric::Euc2d),
            "CEIL_2D" => Ok(Metric::Ceil2d),
            "EXPLICIT" => Ok(Metric::Explicit),
            other => Err(Error::validation(format!("unsupported EDGE_WEIGHT_TYPE {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    /// 0-based home city.
    pub home: usize,
    pub weight: f64,
    /// Carried through for TTP file fidelity; not part of the cost model.
    pub profit: f64,
}

/// Header values of a TTP file that the W-TSP model does not use.
///
/// Kept verbatim so that a parsed benchmark file can be written back unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct TtpHeader {
    pub knapsack_data_type: String,
    pub capacity: String,
    pub min_speed: String,
    pub max_speed: String,
    pub renting_ratio: String,
}

impl Default for TtpHeader {
    fn default() -> Self {
        TtpHeader {
            knapsack_data_type: "uncorrelated".into(),
            capacity: "0".into(),
            min_speed: "0.1".into(),
            max_speed: "1".into(),
            renting_ratio: "1".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub metric: Metric,
    coords: Option<Vec<(f64, f64)>>,
    dist: Vec<f64>,
    n: usize,
    items: Vec<Item>,
    city_items: Vec<Vec<usize>>,
    pub header: TtpHeader,
}

impl Instance {
    /// Builds an instance from coordinates, materializing the distance matrix.
    pub fn from_coords(
        name: impl Into<String>,
        metric: Metric,
        coords: Vec<(f64, f64)>,
        items: Vec<Item>,
    ) -> Result<Self> {
        if metric == Metric::Explicit {
            return Err(Error::validation("EXPLICIT metric requires a distance matrix"));
        }
        let n = coords.len();
        if n < 2 {
            return Err(Error::validation(format!("need at least 2 cities, got {n}")));
        }
        if let Some(i) = coords.iter().position(|c| !c.0.is_finite() || !c.1.is_finite()) {
            return Err(Error::validation(format!("city {} has non-finite coordinates", i + 1)));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = metric.between(coords[i], coords[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self::assemble(name.into(), metric, Some(coords), dist, n, items)
    }

    /// Builds an instance from a full row-major `n x n` distance matrix.
    pub fn from_matrix(name: impl Into<String>, n: usize, dist: Vec<f64>, items: Vec<Item>) -> Result<Self> {
        if n < 2 {
            return Err(Error::validation(format!("need at least 2 cities, got {n}")));
        }
        if dist.len() != n * n {
            return Err(Error::validation(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        if let Some(k) = dist.iter().position(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::validation(format!(
                "distance d({},{}) is negative or not finite",
                k / n + 1,
                k % n + 1
            )));
        }
        Self::assemble(name.into(), Metric::Explicit, None, dist, n, items)
    }

    fn assemble(
        name: String,
        metric: Metric,
        coords: Option<Vec<(f64, f64)>>,
        dist: Vec<f64>,
        n: usize,
        items: Vec<Item>,
    ) -> Result<Self> {
        let mut city_items = vec![Vec::new(); n];
        for (k, item) in items.iter().enumerate() {
            if item.home >= n {
                return Err(Error::validation(format!(
                    "item {} assigned to city {} but instance has {n} cities",
                    k + 1,
                    item.home + 1
                )));
            }
            if !(item.weight > 0.0 && item.weight.is_finite()) {
                return Err(Error::validation(format!(
                    "item {} has non-positive weight {}",
                    k + 1,
                    item.weight
                )));
            }
            city_items[item.home].push(k);
        }
        Ok(Instance {
            name,
            metric,
            coords,
            dist,
            n,
            items,
            city_items,
            header: TtpHeader::default(),
        })
    }

    pub fn with_header(mut self, header: TtpHeader) -> Self {
        self.header = header;
        self
    }

    /// Number of cities.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of items.
    pub fn m(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// Item indices homed at `city`.
    pub fn city_items(&self, city: usize) -> &[usize] {
        &self.city_items[city]
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    /// Checked distance lookup between two 0-based cities.
    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        for c in [i, j] {
            if c >= self.n {
                return Err(Error::IndexOutOfRange { index: c, len: self.n });
            }
        }
        Ok(self.dist[i * self.n + j])
    }

    #[inline]
    pub(crate) fn dist_unchecked(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Row-major distance matrix.
    pub fn distance_matrix(&self) -> &[f64] {
        &self.dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cities(metric: Metric, b: (f64, f64)) -> Instance {
        Instance::from_coords("t", metric, vec![(0.0, 0.0), b], vec![]).unwrap()
    }

    #[test]
    fn ceil_2d_exact_integer() {
        assert_eq!(two_cities(Metric::Ceil2d, (3.0, 4.0)).distance(0, 1).unwrap(), 5.0);
    }

    #[test]
    fn ceil_2d_rounds_up() {
        assert_eq!(two_cities(Metric::Ceil2d, (1.0, 1.0)).distance(0, 1).unwrap(), 2.0);
    }

    #[test]
    fn euc_2d_rounds_to_nearest() {
        assert_eq!(two_cities(Metric::Euc2d, (1.0, 1.0)).distance(0, 1).unwrap(), 1.0);
        assert_eq!(two_cities(Metric::Euc2d, (1.0, 2.0)).distance(1, 0).unwrap(), 2.0);
    }

    #[test]
    fn zero_diagonal_and_symmetry() {
        let inst = Instance::from_coords(
            "t",
            Metric::Ceil2d,
            vec![(0.0, 0.0), (5.5, 1.0), (2.0, 9.0)],
            vec![],
        )
        .unwrap();
        for i in 0..3 {
            assert_eq!(inst.distance(i, i).unwrap(), 0.0);
            for j in 0..3 {
                assert_eq!(inst.distance(i, j).unwrap(), inst.distance(j, i).unwrap());
            }
        }
    }

    #[test]
    fn out_of_range_city() {
        let inst = two_cities(Metric::Ceil2d, (1.0, 1.0));
        assert!(matches!(
            inst.distance(0, 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn explicit_matrix_lookup() {
        let inst = Instance::from_matrix("m", 2, vec![0.0, 7.0, 7.0, 0.0], vec![]).unwrap();
        assert_eq!(inst.metric, Metric::Explicit);
        assert_eq!(inst.distance(1, 0).unwrap(), 7.0);
    }

    #[test]
    fn city_items_partition_items() {
        let items = vec![
            Item { home: 1, weight: 3.0, profit: 0.0 },
            Item { home: 2, weight: 5.0, profit: 0.0 },
            Item { home: 1, weight: 7.0, profit: 0.0 },
        ];
        let inst = Instance::from_coords(
            "t",
            Metric::Ceil2d,
            vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
            items,
        )
        .unwrap();
        assert!(inst.city_items(0).is_empty());
        assert_eq!(inst.city_items(1), &[0, 2]);
        assert_eq!(inst.city_items(2), &[1]);
    }

    #[test]
    fn rejects_bad_items() {
        let coords = vec![(0.0, 0.0), (1.0, 0.0)];
        let bad_home = vec![Item { home: 2, weight: 1.0, profit: 0.0 }];
        assert!(Instance::from_coords("t", Metric::Ceil2d, coords.clone(), bad_home).is_err());
        let bad_weight = vec![Item { home: 1, weight: 0.0, profit: 0.0 }];
        assert!(Instance::from_coords("t", Metric::Ceil2d, coords, bad_weight).is_err());
    }

    #[test]
    fn rejects_single_city() {
        assert!(Instance::from_coords("t", Metric::Ceil2d, vec![(0.0, 0.0)], vec![]).is_err());
    }
}
