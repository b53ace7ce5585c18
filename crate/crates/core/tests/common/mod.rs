//! Reference implementations shared by the integration tests. They work from
//! raw coordinates and item lists and do not call into the cost model.

#![allow(dead_code)]

use dwtsp::{Instance, Item, Metric};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RawInstance {
    pub metric: Metric,
    pub coords: Vec<(f64, f64)>,
    pub items: Vec<Item>,
}

impl RawInstance {
    pub fn random(rng: &mut ChaCha8Rng, n: usize, max_items_per_city: usize, metric: Metric) -> Self {
        let coords = (0..n).map(|_| (rng.gen_range(0.0..500.0), rng.gen_range(0.0..500.0))).collect();
        let mut items = Vec::new();
        for home in 1..n {
            for _ in 0..rng.gen_range(1..=max_items_per_city) {
                items.push(Item { home, weight: rng.gen_range(1..=1000) as f64, profit: 1.0 });
            }
        }
        RawInstance { metric, coords, items }
    }

    pub fn build(&self) -> Instance {
        Instance::from_coords("oracle", self.metric, self.coords.clone(), self.items.clone()).unwrap()
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        let (xa, ya) = self.coords[a];
        let (xb, yb) = self.coords[b];
        let d = ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt();
        match self.metric {
            Metric::Euc2d => (d + 0.5).floor(),
            Metric::Ceil2d => d.ceil(),
            Metric::Explicit => unreachable!("oracle instances have coordinates"),
        }
    }

    /// Per-city weight of the active items.
    pub fn weights(&self, active: &[bool]) -> Vec<f64> {
        let mut w = vec![0.0; self.n()];
        for (item, &on) in self.items.iter().zip(active) {
            if on {
                w[item.home] += item.weight;
            }
        }
        w
    }

    /// Cost of `perm` summed term by term: each leg's length times the total
    /// weight of every city visited up to and including the leg's start.
    pub fn cost(&self, weights: &[f64], perm: &[usize]) -> f64 {
        let n = perm.len();
        let mut total = 0.0;
        for i in 0..n {
            let carried: f64 = perm[..=i].iter().map(|&c| weights[c]).sum();
            total += self.dist(perm[i], perm[(i + 1) % n]) * carried;
        }
        total
    }

    pub fn closed_length(&self, perm: &[usize]) -> f64 {
        let n = perm.len();
        let mut total = 0.0;
        for i in 0..n {
            total += self.dist(perm[i], perm[(i + 1) % n]);
        }
        total
    }
}

/// Calls `visit` with every permutation of `0..n` that starts with 0.
pub fn for_each_tour(n: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(perm: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
        if k == perm.len() {
            visit(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(perm, k + 1, visit);
            perm.swap(k, i);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rec(&mut perm, 1, visit);
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn is_valid_tour(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n
        && perm[0] == 0
        && perm.iter().all(|&c| c < n && !std::mem::replace(&mut seen[c], true))
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
