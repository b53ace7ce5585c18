//! Per-cell algorithm comparison over a results table.

use std::collections::BTreeMap;
use std::io::Write;

use super::mwu::{bonferroni, mwu_test, Direction, StatResult};
use super::{mean, median, std_dev};
use crate::error::{Error, Result};
use crate::experiment::{format_float, AlgorithmSpec, ResultRow};

pub const ALPHA: f64 = 0.05;

pub const STATS_HEADER: [&str; 9] = ["instance", "tau", "L", "U", "c", "algorithm", "mean", "std", "worse_than"];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub instance: String,
    pub tau: u64,
    pub lower: u32,
    pub upper: u32,
    pub c: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmStats {
    /// 1-based position in the cell's (mu, operator) ordering.
    pub index: usize,
    pub algorithm: AlgorithmSpec,
    /// Final-epoch perf of every run.
    pub values: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    /// Indices of algorithms this one beats significantly.
    pub worse_than: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairComparison {
    pub first: usize,
    pub second: usize,
    pub result: StatResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub key: CellKey,
    pub algorithms: Vec<AlgorithmStats>,
    pub comparisons: Vec<PairComparison>,
    /// Set when the cell has fewer than two algorithms or an algorithm with
    /// fewer than two runs; no tests are run then.
    pub warning: Option<String>,
}

impl CellStats {
    pub fn algorithm(&self, alg: AlgorithmSpec) -> Option<&AlgorithmStats> {
        self.algorithms.iter().find(|a| a.algorithm == alg)
    }

    pub fn comparison(&self, a: usize, b: usize) -> Option<&PairComparison> {
        self.comparisons.iter().find(|c| (c.first, c.second) == (a, b) || (c.first, c.second) == (b, a))
    }
}

/// Groups rows into (instance, tau, L, U, c) cells and compares the
/// final-epoch perf of every algorithm pair within each cell, with Bonferroni
/// adjustment over the cell's pairs. Diagnostic rows and rows without a perf
/// value are ignored.
pub fn rank_algorithms(rows: &[ResultRow]) -> Result<Vec<CellStats>> {
    // (seq_id, rep_id) -> (latest epoch seen, its perf)
    type Runs = BTreeMap<(usize, usize), (usize, Option<f64>)>;
    let mut finals: BTreeMap<CellKey, BTreeMap<AlgorithmSpec, Runs>> = BTreeMap::new();
    for r in rows {
        let key = CellKey { instance: r.instance.clone(), tau: r.tau, lower: r.lower, upper: r.upper, c: r.c };
        let algs = finals.entry(key).or_default();
        let runs = algs.entry(AlgorithmSpec { mu: r.mu, operator: r.operator }).or_default();
        let Some(epoch) = r.epoch else { continue };
        let slot = runs.entry((r.seq_id, r.rep_id)).or_insert((epoch, r.perf));
        if epoch >= slot.0 {
            *slot = (epoch, r.perf);
        }
    }

    finals
        .into_iter()
        .map(|(key, algs)| {
            let mut algorithms: Vec<AlgorithmStats> = algs
                .into_iter()
                .enumerate()
                .map(|(i, (alg, runs))| {
                    let values: Vec<f64> = runs.values().filter_map(|&(_, perf)| perf).collect();
                    let (mean, median) =
                        if values.is_empty() { (f64::NAN, f64::NAN) } else { (mean(&values), median(&values)) };
                    let std = if values.len() < 2 { f64::NAN } else { std_dev(&values) };
                    AlgorithmStats { index: i + 1, algorithm: alg, values, mean, std, median, worse_than: Vec::new() }
                })
                .collect();
            let warning = if algorithms.len() < 2 {
                Some(format!("only {} algorithm(s) in cell", algorithms.len()))
            } else {
                algorithms
                    .iter()
                    .find(|a| a.values.len() < 2)
                    .map(|a| format!("{} has {} run(s) in cell", a.algorithm.label(), a.values.len()))
            };
            if let Some(w) = &warning {
                log::warn!("{} tau={} L={} U={} c={}: {w}", key.instance, key.tau, key.lower, key.upper, key.c);
                return Ok(CellStats { key, algorithms, comparisons: Vec::new(), warning });
            }

            let mut comparisons = Vec::new();
            for i in 0..algorithms.len() {
                for j in i + 1..algorithms.len() {
                    let result = mwu_test(&algorithms[i].values, &algorithms[j].values)?;
                    comparisons.push(PairComparison { first: i + 1, second: j + 1, result });
                }
            }
            let raw: Vec<f64> = comparisons.iter().map(|c| c.result.p_raw).collect();
            for (c, p) in comparisons.iter_mut().zip(bonferroni(&raw)?) {
                c.result.p_adjusted = p;
                if p < ALPHA {
                    match c.result.direction {
                        Direction::FirstSmaller => algorithms[c.first - 1].worse_than.push(c.second),
                        Direction::SecondSmaller => algorithms[c.second - 1].worse_than.push(c.first),
                        Direction::Equal => {}
                    }
                }
            }
            for a in &mut algorithms {
                a.worse_than.sort_unstable();
            }
            Ok(CellStats { key, algorithms, comparisons, warning: None })
        })
        .collect()
}

/// One row per (cell, algorithm). `worse_than` is a semicolon-joined index
/// list, and `NA` for cells that were not tested.
pub fn write_stats_csv<W: Write>(cells: &[CellStats], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let err = |e: csv::Error| Error::validation(format!("writing stats: {e}"));
    w.write_record(STATS_HEADER).map_err(err)?;
    let num = |v: f64| if v.is_nan() { "NA".to_string() } else { format_float(v) };
    for cell in cells {
        for a in &cell.algorithms {
            let worse = if cell.warning.is_some() {
                "NA".to_string()
            } else {
                a.worse_than.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
            };
            w.write_record([
                cell.key.instance.clone(),
                cell.key.tau.to_string(),
                cell.key.lower.to_string(),
                cell.key.upper.to_string(),
                cell.key.c.to_string(),
                format!("{}:{}", a.index, a.algorithm.label()),
                num(a.mean),
                num(a.std),
                worse,
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::validation(format!("writing stats: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ea::Operator;

    fn rows_for(alg: AlgorithmSpec, perfs: &[f64]) -> Vec<ResultRow> {
        perfs
            .iter()
            .enumerate()
            .flat_map(|(seq, &p)| {
                // epoch 0 carries a decoy value; only the final epoch counts
                [(0, p + 1000.0), (2, p)].into_iter().map(move |(epoch, perf)| ResultRow {
                    instance: "x".into(),
                    mu: alg.mu,
                    operator: alg.operator,
                    tau: 100,
                    lower: 30,
                    upper: 70,
                    c: 5,
                    seq_id: seq,
                    rep_id: 0,
                    epoch: Some(epoch),
                    best_cost: Some(1.0),
                    baseline_cost: Some(1.0),
                    perf: Some(perf),
                    evals_used: Some(100),
                })
            })
            .collect()
    }

    #[test]
    fn dominant_algorithm_beats_all_others() {
        let six = AlgorithmSpec::standard_six();
        let mut rows = Vec::new();
        for (k, &alg) in six.iter().enumerate() {
            let perfs: Vec<f64> = (0..30).map(|i| (k * 100) as f64 + i as f64 * 0.1).collect();
            rows.extend(rows_for(alg, &perfs));
        }
        let cells = rank_algorithms(&rows).unwrap();
        assert_eq!(cells.len(), 1);
        let cell = &cells[0];
        assert_eq!(cell.comparisons.len(), 15);
        assert_eq!(cell.algorithms[0].worse_than, vec![2, 3, 4, 5, 6]);
        assert!(cell.algorithms[5].worse_than.is_empty());
        assert!((cell.algorithms[0].mean - 1.45).abs() < 1e-9);
        let mut buf = Vec::new();
        write_stats_csv(&cells, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "x,100,30,70,5,1:(1+1)-EA[inversion],1.45,0.880341,2;3;4;5;6");
    }

    #[test]
    fn identical_data_gives_empty_lists() {
        let perfs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let rows: Vec<ResultRow> =
            AlgorithmSpec::standard_six().into_iter().flat_map(|s| rows_for(s, &perfs)).collect();
        let cells = rank_algorithms(&rows).unwrap();
        assert!(cells[0].algorithms.iter().all(|a| a.worse_than.is_empty()));
        assert!(cells[0].comparisons.iter().all(|c| c.result.p_adjusted == 1.0));
    }

    #[test]
    fn constant_sample_stats() {
        let a = AlgorithmSpec { mu: 1, operator: Operator::Jump };
        let b = AlgorithmSpec { mu: 20, operator: Operator::Jump };
        let mut rows = rows_for(a, &[4.0; 6]);
        rows.extend(rows_for(b, &[5.0; 6]));
        let cells = rank_algorithms(&rows).unwrap();
        assert_eq!((cells[0].algorithms[0].mean, cells[0].algorithms[0].std), (4.0, 0.0));
    }

    #[test]
    fn thin_cells_get_warnings() {
        let a = AlgorithmSpec { mu: 1, operator: Operator::Jump };
        let b = AlgorithmSpec { mu: 20, operator: Operator::Jump };
        let single = rank_algorithms(&rows_for(a, &[1.0, 2.0, 3.0])).unwrap();
        assert!(single[0].warning.is_some());
        let mut rows = rows_for(a, &[1.0, 2.0, 3.0]);
        rows.extend(rows_for(b, &[1.0]));
        let cells = rank_algorithms(&rows).unwrap();
        assert!(cells[0].warning.is_some());
        assert!(cells[0].comparisons.is_empty());
        let mut buf = Vec::new();
        write_stats_csv(&cells, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(2).unwrap().ends_with(",1,NA,NA"), "{text}");
    }
}
