//! Statistics over result tables and tour-change diagnostics.

mod diff;
mod mwu;
mod ranking;

pub use diff::{tour_diff, write_tour_diff_csv, TourDiff, TourDiffRecord, TourDiffSummary, TOUR_DIFF_HEADER};
pub use mwu::{bonferroni, mwu_test, Direction, StatResult};
pub use ranking::{
    rank_algorithms, write_stats_csv, AlgorithmStats, CellKey, CellStats, PairComparison, ALPHA, STATS_HEADER,
};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - mu) * (x - mu)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sample() {
        let xs = [4.2; 7];
        assert_eq!(mean(&xs), 4.2);
        assert_eq!(std_dev(&xs), 0.0);
    }

    #[test]
    fn descriptive_values() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert_eq!(mean(&xs), 5.0);
        // sum of squares 32, n - 1 = 7
        assert!((std_dev(&xs) - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(median(&xs), 4.5);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
    }
}
