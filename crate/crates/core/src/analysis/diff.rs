//! How a tour changed between two epochs: per-city position shifts and node
//! weight changes, plus the number of new edges.

use std::collections::HashSet;
use std::io::Write;

use crate::cost::NodeWeights;
use crate::error::{Error, Result};
use crate::experiment::format_float;
use crate::instance::Instance;
use crate::plan::PackingPlan;
use crate::tour::Tour;

pub const TOUR_DIFF_HEADER: [&str; 12] = [
    "epoch",
    "kind",
    "city",
    "pos_prev",
    "pos_new",
    "pos_shift",
    "weight_prev",
    "weight_new",
    "weight_delta",
    "affected",
    "new_edges",
    "affected_cities",
];

/// One city's change. Cities and positions are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct TourDiffRecord {
    pub city: usize,
    pub pos_prev: usize,
    pub pos_new: usize,
    /// Negative when the city moved towards the front of the tour.
    pub pos_shift: i64,
    pub weight_prev: f64,
    pub weight_new: f64,
    pub weight_delta: f64,
    pub affected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TourDiffSummary {
    /// Undirected edges of the new tour (closing edge included) absent from the previous one.
    pub new_edges: usize,
    pub affected_cities: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TourDiff {
    pub records: Vec<TourDiffRecord>,
    pub summary: TourDiffSummary,
}

pub fn tour_diff(
    inst: &Instance,
    plan_prev: &PackingPlan,
    plan_new: &PackingPlan,
    tour_prev: &Tour,
    tour_new: &Tour,
) -> Result<TourDiff> {
    let n = inst.n();
    if tour_prev.len() != n || tour_new.len() != n {
        return Err(Error::contract(format!(
            "tours of length {} and {} for an instance with {n} cities",
            tour_prev.len(),
            tour_new.len()
        )));
    }
    let w_prev = NodeWeights::new(inst, plan_prev)?;
    let w_new = NodeWeights::new(inst, plan_new)?;
    let p_prev = tour_prev.positions();
    let p_new = tour_new.positions();
    let records: Vec<TourDiffRecord> = (0..n)
        .map(|city| {
            let weight_delta = w_new.get(city) - w_prev.get(city);
            TourDiffRecord {
                city,
                pos_prev: p_prev[city],
                pos_new: p_new[city],
                pos_shift: p_new[city] as i64 - p_prev[city] as i64,
                weight_prev: w_prev.get(city),
                weight_new: w_new.get(city),
                weight_delta,
                affected: weight_delta != 0.0,
            }
        })
        .collect();
    let old: HashSet<(usize, usize)> = tour_prev.undirected_edges().collect();
    let new_edges = tour_new.undirected_edges().filter(|e| !old.contains(e)).count();
    let affected_cities = records.iter().filter(|r| r.affected).count();
    Ok(TourDiff { records, summary: TourDiffSummary { new_edges, affected_cities } })
}

/// Writes one row per (epoch, city) followed by a summary row per epoch.
/// Cities and positions are written 1-based.
pub fn write_tour_diff_csv<W: Write>(diffs: &[(usize, TourDiff)], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let err = |e: csv::Error| Error::validation(format!("writing tour diff: {e}"));
    w.write_record(TOUR_DIFF_HEADER).map_err(err)?;
    let na = || "NA".to_string();
    for (epoch, diff) in diffs {
        for r in &diff.records {
            w.write_record([
                epoch.to_string(),
                "city".into(),
                (r.city + 1).to_string(),
                (r.pos_prev + 1).to_string(),
                (r.pos_new + 1).to_string(),
                r.pos_shift.to_string(),
                format_float(r.weight_prev),
                format_float(r.weight_new),
                format_float(r.weight_delta),
                u8::from(r.affected).to_string(),
                na(),
                na(),
            ])
            .map_err(err)?;
        }
        let mut summary = vec![epoch.to_string(), "summary".into()];
        summary.extend(std::iter::repeat_with(na).take(8));
        summary.push(diff.summary.new_edges.to_string());
        summary.push(diff.summary.affected_cities.to_string());
        w.write_record(summary).map_err(err)?;
    }
    w.flush().map_err(|e| Error::validation(format!("writing tour diff: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Item, Metric};

    fn inst5() -> Instance {
        let coords = (0..5).map(|i| (i as f64, (i * i) as f64)).collect();
        let items = vec![
            Item { home: 1, weight: 2.0, profit: 1.0 },
            Item { home: 2, weight: 3.0, profit: 1.0 },
            Item { home: 4, weight: 5.0, profit: 1.0 },
        ];
        Instance::from_coords("five", Metric::Euc2d, coords, items).unwrap()
    }

    fn tour(ids: &[usize]) -> Tour {
        Tour::from_one_based(ids).unwrap()
    }

    #[test]
    fn identical_tours_and_plans() {
        let inst = inst5();
        let plan = PackingPlan::all_active(3);
        let t = tour(&[1, 4, 2, 5, 3]);
        let d = tour_diff(&inst, &plan, &plan, &t, &t).unwrap();
        assert_eq!(d.summary, TourDiffSummary { new_edges: 0, affected_cities: 0 });
        assert!(d.records.iter().all(|r| r.pos_shift == 0 && r.weight_delta == 0.0));
    }

    #[test]
    fn adjacent_swap_creates_two_edges() {
        let inst = inst5();
        let plan = PackingPlan::all_active(3);
        let d = tour_diff(&inst, &plan, &plan, &tour(&[1, 2, 3, 4, 5]), &tour(&[1, 3, 2, 4, 5])).unwrap();
        assert_eq!(d.summary.new_edges, 2);
        let shifts: Vec<i64> = d.records.iter().map(|r| r.pos_shift).collect();
        assert_eq!(shifts, vec![0, 1, -1, 0, 0]);
    }

    #[test]
    fn reversed_tour_shares_all_edges() {
        let inst = inst5();
        let plan = PackingPlan::all_active(3);
        let d = tour_diff(&inst, &plan, &plan, &tour(&[1, 2, 3, 4, 5]), &tour(&[1, 5, 4, 3, 2])).unwrap();
        assert_eq!(d.summary.new_edges, 0);
    }

    #[test]
    fn weight_changes_mark_affected_cities() {
        let inst = inst5();
        let prev = "110".parse().unwrap();
        let new = "011".parse().unwrap();
        let t = tour(&[1, 2, 3, 4, 5]);
        let d = tour_diff(&inst, &prev, &new, &t, &t).unwrap();
        assert_eq!(d.summary.affected_cities, 2);
        assert_eq!(d.records[1].weight_delta, -2.0);
        assert_eq!(d.records[4].weight_delta, 5.0);
        assert!(!d.records[2].affected);
    }

    #[test]
    fn mismatches_are_contract_errors() {
        let inst = inst5();
        let plan = PackingPlan::all_active(3);
        let short = PackingPlan::all_active(2);
        let t = tour(&[1, 2, 3, 4, 5]);
        assert!(matches!(tour_diff(&inst, &plan, &short, &t, &t), Err(Error::Contract(_))));
        let t4 = tour(&[1, 2, 3, 4]);
        assert!(matches!(tour_diff(&inst, &plan, &plan, &t, &t4), Err(Error::Contract(_))));
    }

    #[test]
    fn csv_layout() {
        let inst = inst5();
        let plan = PackingPlan::all_active(3);
        let d = tour_diff(&inst, &plan, &plan, &tour(&[1, 2, 3, 4, 5]), &tour(&[1, 3, 2, 4, 5])).unwrap();
        let mut buf = Vec::new();
        write_tour_diff_csv(&[(1, d)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], TOUR_DIFF_HEADER.join(","));
        assert_eq!(lines[2], "1,city,2,2,3,1,2,2,0,0,NA,NA");
        assert_eq!(lines[6], "1,summary,NA,NA,NA,NA,NA,NA,NA,NA,2,0");
    }
}
