//! The node-weighted tour cost and evaluation accounting.
//!
//! Each leg of a tour is charged its distance times the total weight collected
//! so far; the closing leg back to the start carries the full weight.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::plan::PackingPlan;
use crate::tour::Tour;

/// Counts fitness evaluations, optionally against a limit.
///
/// Every cost evaluation is charged here, which makes the evaluation count the
/// single currency for epochs and baselines.
#[derive(Debug, Clone, Default)]
pub struct Budget {
    used: u64,
    limit: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_limit(limit: u64) -> Self {
        Budget { used: 0, limit: Some(limit) }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    pub fn remaining(&self) -> Option<u64> {
        self.limit.map(|l| l.saturating_sub(self.used))
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self.limit, Some(l) if self.used >= l)
    }

    #[inline]
    fn charge(&mut self) {
        self.used += 1;
    }
}

/// Per-city weights `w(i)` induced by a packing plan.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeights(Vec<f64>);

impl NodeWeights {
    pub fn new(inst: &Instance, plan: &PackingPlan) -> Result<Self> {
        plan.ensure_len(inst.m())?;
        let items = inst.items();
        let w = (0..inst.n())
            .map(|city| {
                inst.city_items(city)
                    .iter()
                    .filter(|&&k| plan.is_active(k))
                    .fold(0.0, |acc, &k| acc + items[k].weight)
            })
            .collect();
        Ok(NodeWeights(w))
    }

    /// Weights given directly per city, bypassing items.
    pub fn from_vec(weights: Vec<f64>) -> Self {
        NodeWeights(weights)
    }

    pub fn get(&self, city: usize) -> f64 {
        self.0[city]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, w| acc + w)
    }
}

/// An instance paired with the node weights of one packing plan.
#[derive(Debug, Clone)]
pub struct CostModel<'a> {
    inst: &'a Instance,
    weights: NodeWeights,
}

impl<'a> CostModel<'a> {
    pub fn new(inst: &'a Instance, plan: &PackingPlan) -> Result<Self> {
        Ok(CostModel {
            inst,
            weights: NodeWeights::new(inst, plan)?,
        })
    }

    pub fn with_weights(inst: &'a Instance, weights: NodeWeights) -> Result<Self> {
        if weights.0.len() != inst.n() {
            return Err(Error::contract(format!(
                "{} node weights for {} cities",
                weights.0.len(),
                inst.n()
            )));
        }
        Ok(CostModel { inst, weights })
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn weights(&self) -> &NodeWeights {
        &self.weights
    }

    /// Weighted cost of `tour`; charges one evaluation to `budget`.
    pub fn cost(&self, tour: &Tour, budget: &mut Budget) -> Result<f64> {
        if tour.len() != self.inst.n() {
            return Err(Error::contract(format!(
                "tour over {} cities for an instance with {}",
                tour.len(),
                self.inst.n()
            )));
        }
        Ok(self.cost_unchecked(tour.cities(), budget))
    }

    #[inline]
    pub(crate) fn cost_unchecked(&self, perm: &[usize], budget: &mut Budget) -> f64 {
        budget.charge();
        let w = self.weights.as_slice();
        let n = perm.len();
        let mut carried = 0.0;
        let mut cost = 0.0;
        for k in 0..n - 1 {
            carried += w[perm[k]];
            cost += self.inst.dist_unchecked(perm[k], perm[k + 1]) * carried;
        }
        carried += w[perm[n - 1]];
        cost + self.inst.dist_unchecked(perm[n - 1], perm[0]) * carried
    }
}

/// Weight of `city` under `plan`: the summed weight of its active items.
pub fn node_weight(inst: &Instance, plan: &PackingPlan, city: usize) -> Result<f64> {
    plan.ensure_len(inst.m())?;
    if city >= inst.n() {
        return Err(Error::IndexOutOfRange { index: city, len: inst.n() });
    }
    Ok(inst
        .city_items(city)
        .iter()
        .filter(|&&k| plan.is_active(k))
        .fold(0.0, |acc, &k| acc + inst.items()[k].weight))
}

/// Weighted tour cost under `plan`. Charges exactly one evaluation to `budget`.
pub fn tour_cost(inst: &Instance, plan: &PackingPlan, tour: &Tour, budget: &mut Budget) -> Result<f64> {
    CostModel::new(inst, plan)?.cost(tour, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Item, Metric};

    fn item(home: usize, weight: f64) -> Item {
        Item { home, weight, profit: 0.0 }
    }

    fn three_item_city() -> Instance {
        Instance::from_coords(
            "w",
            Metric::Ceil2d,
            vec![(0.0, 0.0), (1.0, 0.0)],
            vec![item(1, 3.0), item(1, 5.0), item(1, 7.0)],
        )
        .unwrap()
    }

    #[test]
    fn node_weight_sums_active_items() {
        let inst = three_item_city();
        let all: PackingPlan = "110".parse().unwrap();
        assert_eq!(node_weight(&inst, &all, 1).unwrap(), 8.0);
        let none: PackingPlan = "000".parse().unwrap();
        assert_eq!(node_weight(&inst, &none, 1).unwrap(), 0.0);
        let masked: PackingPlan = "101".parse().unwrap();
        assert_eq!(node_weight(&inst, &masked, 1).unwrap(), 10.0);
        assert_eq!(node_weight(&inst, &masked, 0).unwrap(), 0.0);
    }

    #[test]
    fn node_weight_length_mismatch() {
        let inst = three_item_city();
        let plan: PackingPlan = "10".parse().unwrap();
        assert!(matches!(node_weight(&inst, &plan, 1), Err(Error::Contract(_))));
    }

    #[test]
    fn two_city_hand_computation() {
        // d(1,2) = 1, w(1) = 1, w(2) = 0: 1*1 + 1*1
        let inst = Instance::from_coords(
            "two",
            Metric::Ceil2d,
            vec![(0.0, 0.0), (1.0, 0.0)],
            vec![item(0, 1.0)],
        )
        .unwrap();
        let plan = PackingPlan::all_active(1);
        let mut budget = Budget::unlimited();
        let c = tour_cost(&inst, &plan, &Tour::identity(2), &mut budget).unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(budget.used(), 1);
    }

    #[test]
    fn zero_weights_give_zero_cost() {
        let inst = three_item_city();
        let plan = PackingPlan::all_inactive(3);
        let c = tour_cost(&inst, &plan, &Tour::identity(2), &mut Budget::unlimited()).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn wrong_tour_length_is_contract_error() {
        let inst = three_item_city();
        let plan = PackingPlan::all_active(3);
        let r = tour_cost(&inst, &plan, &Tour::identity(3), &mut Budget::unlimited());
        assert!(matches!(r, Err(Error::Contract(_))));
    }

    #[test]
    fn budget_accounting() {
        let mut b = Budget::with_limit(2);
        assert!(!b.is_exhausted());
        b.charge();
        b.charge();
        assert!(b.is_exhausted());
        assert_eq!(b.remaining(), Some(0));
    }
}
