//! Two-sided Mann-Whitney U (Wilcoxon rank-sum) test.
//!
//! Ties get midranks. When both samples have at most 8 values the p-value comes
//! from the exact permutation distribution of the midrank sum; otherwise from
//! the normal approximation with tie-corrected variance and a 0.5 continuity
//! correction.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

const EXACT_MAX: usize = 8;

/// Which sample tends to have smaller values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    FirstSmaller,
    SecondSmaller,
    Equal,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::FirstSmaller => Direction::SecondSmaller,
            Direction::SecondSmaller => Direction::FirstSmaller,
            Direction::Equal => Direction::Equal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatResult {
    /// U of the first sample: pairs with `a > b`, ties counting one half.
    pub u_statistic: f64,
    pub p_raw: f64,
    /// Equal to `p_raw` until a multiplicity correction is applied.
    pub p_adjusted: f64,
    pub direction: Direction,
}

/// Doubled midranks (integers) of the pooled sample, plus tie group sizes.
fn doubled_midranks(pooled: &[f64]) -> (Vec<i64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&x, &y| pooled[x].total_cmp(&pooled[y]));
    let mut ranks = vec![0i64; pooled.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        // positions i..=j share rank ((i+1) + (j+1)) / 2
        let doubled = (i + j + 2) as i64;
        for &k in &order[i..=j] {
            ranks[k] = doubled;
        }
        ties.push(j - i + 1);
        i = j + 1;
    }
    (ranks, ties)
}

/// Counts size-`k` subsets of `ranks` whose doubled-rank sum is at least as far
/// from the null mean as `observed`.
fn exact_two_sided(ranks: &[i64], k: usize, observed: i64) -> f64 {
    let n = ranks.len();
    let total: i64 = ranks.iter().sum();
    // Null mean of the doubled rank sum times n: k * total / n, kept integral by scaling.
    let scaled_dev = |s: i64| (s * n as i64 - k as i64 * total).abs();
    let threshold = scaled_dev(observed);
    let mut extreme = 0u64;
    let mut count = 0u64;
    fn rec(
        ranks: &[i64],
        start: usize,
        left: usize,
        sum: i64,
        visit: &mut dyn FnMut(i64),
    ) {
        if left == 0 {
            visit(sum);
            return;
        }
        for i in start..=ranks.len() - left {
            rec(ranks, i + 1, left - 1, sum + ranks[i], visit);
        }
    }
    rec(ranks, 0, k, 0, &mut |s| {
        count += 1;
        if scaled_dev(s) >= threshold {
            extreme += 1;
        }
    });
    extreme as f64 / count as f64
}

pub fn mwu_test(a: &[f64], b: &[f64]) -> Result<StatResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::contract("rank-sum test needs two non-empty samples"));
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::contract("rank-sum test samples contain NaN"));
    }
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = doubled_midranks(&pooled);
    let rank_sum_doubled: i64 = ranks[..na].iter().sum();
    let (na_f, nb_f) = (na as f64, nb as f64);
    let u = rank_sum_doubled as f64 / 2.0 - na_f * (na_f + 1.0) / 2.0;
    let mean_u = na_f * nb_f / 2.0;
    let direction = if u < mean_u {
        Direction::FirstSmaller
    } else if u > mean_u {
        Direction::SecondSmaller
    } else {
        Direction::Equal
    };

    let p = if ties.len() == 1 {
        1.0
    } else if na <= EXACT_MAX && nb <= EXACT_MAX {
        exact_two_sided(&ranks, na, rank_sum_doubled)
    } else {
        let n = (na + nb) as f64;
        let tie_term: f64 = ties.iter().map(|&t| (t as f64).powi(3) - t as f64).sum::<f64>() / (n * (n - 1.0));
        let var = na_f * nb_f / 12.0 * ((n + 1.0) - tie_term);
        let z = ((u - mean_u).abs() - 0.5).max(0.0) / var.sqrt();
        let normal = Normal::standard();
        2.0 * normal.sf(z)
    };
    let p = p.clamp(0.0, 1.0);
    Ok(StatResult { u_statistic: u, p_raw: p, p_adjusted: p, direction })
}

/// Multiplies every p-value by the family size, capped at 1.
pub fn bonferroni(p_values: &[f64]) -> Result<Vec<f64>> {
    if let Some(p) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::contract(format!("p-value {p} outside [0, 1]")));
    }
    let k = p_values.len() as f64;
    Ok(p_values.iter().map(|p| (p * k).min(1.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = mwu_test(&a, &a).unwrap();
        assert_eq!(r.p_raw, 1.0);
        assert_eq!(r.direction, Direction::Equal);
    }

    #[test]
    fn all_values_equal() {
        let r = mwu_test(&[5.0; 20], &[5.0; 30]).unwrap();
        assert_eq!(r.p_raw, 1.0);
    }

    #[test]
    fn fully_separated_small_samples() {
        // 2 extreme arrangements out of C(6,3) = 20
        let r = mwu_test(&[1.0, 2.0, 3.0], &[10.0, 11.0, 12.0]).unwrap();
        assert_eq!(r.u_statistic, 0.0);
        assert!((r.p_raw - 0.1).abs() < 1e-12);
        assert_eq!(r.direction, Direction::FirstSmaller);
    }

    #[test]
    fn exact_matches_reference_values() {
        // scipy.stats.mannwhitneyu(a, b, method="exact")
        let cases: [(&[f64], &[f64], f64, f64); 3] = [
            (&[1.0, 4.0, 7.0], &[2.0, 3.0, 5.0, 6.0, 8.0], 6.0, 0.7857142857142857),
            (
                &[1.5, 2.5, 9.0, 11.0, 12.0, 3.3, 4.1, 0.2],
                &[5.0, 6.0, 7.0, 8.0, 10.0, 13.0, 14.0, 15.0],
                14.0,
                0.06495726495726495,
            ),
            (&[3.0, 1.0], &[2.0, 5.0, 4.0, 6.0, 7.0, 8.0, 9.0], 1.0, 0.1111111111111111),
        ];
        for (a, b, u, p) in cases {
            let r = mwu_test(a, b).unwrap();
            assert_eq!(r.u_statistic, u);
            assert!((r.p_raw - p).abs() < 1e-12, "{a:?} vs {b:?}: {}", r.p_raw);
        }
    }

    #[test]
    fn empty_sample_rejected() {
        assert!(mwu_test(&[], &[1.0]).is_err());
        assert!(mwu_test(&[f64::NAN], &[1.0]).is_err());
    }

    #[test]
    fn normal_approximation_large_separation() {
        let a: Vec<f64> = (0..30).map(f64::from).collect();
        let b: Vec<f64> = (100..130).map(f64::from).collect();
        let r = mwu_test(&a, &b).unwrap();
        assert!(r.p_raw < 1e-9);
        assert_eq!(r.u_statistic, 0.0);
    }

    #[test]
    fn normal_approximation_matches_reference() {
        // x = 1..=10, y = 6..=15: U = 12.5 with ties {6..10};
        // mu = 50, var = 100/12 * (21 - 5*6/380), z = (37.5 - 0.5) / sd.
        let a: Vec<f64> = (1..=10).map(f64::from).collect();
        let b: Vec<f64> = (6..=15).map(f64::from).collect();
        let r = mwu_test(&a, &b).unwrap();
        assert_eq!(r.u_statistic, 12.5);
        let var = 100.0 / 12.0 * (21.0 - 30.0 / 380.0);
        let z = 37.0 / f64::sqrt(var);
        let expect = 2.0 * Normal::standard().sf(z);
        assert!((r.p_raw - expect).abs() < 1e-12);
        // scipy.stats.mannwhitneyu(x, y, method="asymptotic")
        assert!((r.p_raw - 0.005075392315273923).abs() < 1e-9, "p = {}", r.p_raw);
    }

    #[test]
    fn bonferroni_examples() {
        assert_eq!(bonferroni(&[0.01, 0.2]).unwrap(), vec![0.02, 0.4]);
        assert_eq!(bonferroni(&[0.9]).unwrap(), vec![0.9]);
        assert_eq!(bonferroni(&[0.6, 0.7]).unwrap(), vec![1.0, 1.0]);
        assert!(bonferroni(&[1.5]).is_err());
        assert!(bonferroni(&[-0.1]).is_err());
    }
}
