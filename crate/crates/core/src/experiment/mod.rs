//! The experimental protocol: grids of dynamic settings, offline baselines and
//! the relative-performance table.

mod baseline;
mod config;
mod grid;
mod results;

pub use baseline::{offline_baseline, BaselineCache, BaselineKey, BASELINE_MU, BASELINE_OPERATOR};
pub use config::{AlgorithmSpec, Bounds, GridConfig};
pub use grid::{fingerprint, run_grid, GridOptions};
pub use results::{
    format_float, read_results_csv, read_run_csv, write_results_csv, write_run_csv, ResultRow, RESULTS_HEADER, RUN_HEADER,
};

use crate::error::{Error, Result};

/// Percentage by which `cost` exceeds `baseline`; negative when it beats it.
pub fn relative_perf(cost: f64, baseline: f64) -> Result<f64> {
    if baseline.is_nan() || baseline <= 0.0 {
        return Err(Error::contract(format!("baseline cost must be positive, got {baseline}")));
    }
    Ok((cost / baseline - 1.0) * 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_perf_examples() {
        assert!((relative_perf(120.0, 100.0).unwrap() - 20.0).abs() < 1e-12);
        assert_eq!(relative_perf(100.0, 100.0).unwrap(), 0.0);
        assert!((relative_perf(95.0, 100.0).unwrap() + 5.0).abs() < 1e-12);
        assert!(relative_perf(1.0, 0.0).is_err());
        assert!(relative_perf(1.0, -3.0).is_err());
    }
}
