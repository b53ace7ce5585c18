//! The (mu+1)-EA on tours and its multi-epoch driver.
//!
//! Each step picks one parent uniformly, mutates a copy once, and lets the
//! offspring replace that parent when its cost is not larger. With `mu = 1`
//! this is the (1+1)-EA.

mod operators;

pub use operators::{exchange, inversion, jump, sample_positions, Operator};

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::cost::{Budget, CostModel};
use crate::dynamics::PackingSequence;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::seed::{self, Rng};
use crate::tour::Tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EaConfig {
    pub mu: usize,
    pub operator: Operator,
    pub seed: u64,
}

impl EaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mu == 0 {
            return Err(Error::validation("population size mu must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub tour: Tour,
    /// Cost under the plan of the current epoch; NaN before the first evaluation.
    pub cost: f64,
}

#[derive(Debug, Clone)]
pub struct Population {
    members: Vec<Member>,
    scratch: Vec<usize>,
}

impl Population {
    /// `mu` tours with city 0 first and a uniformly shuffled remainder
    /// (Fisher-Yates). Costs stay unset until [`Population::evaluate`].
    pub fn random(n: usize, mu: usize, rng: &mut Rng) -> Self {
        let members = (0..mu)
            .map(|_| {
                let mut perm: Vec<usize> = (0..n).collect();
                perm[1..].shuffle(rng);
                Member {
                    tour: Tour::from_vec_unchecked(perm),
                    cost: f64::NAN,
                }
            })
            .collect();
        Population { members, scratch: Vec::with_capacity(n) }
    }

    pub fn from_tours(tours: Vec<Tour>) -> Result<Self> {
        if tours.is_empty() {
            return Err(Error::validation("population must not be empty"));
        }
        let n = tours[0].len();
        if tours.iter().any(|t| t.len() != n) {
            return Err(Error::contract("population tours differ in length"));
        }
        Ok(Population {
            members: tours.into_iter().map(|tour| Member { tour, cost: f64::NAN }).collect(),
            scratch: Vec::with_capacity(n),
        })
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Re-evaluates every member under `model`, charging one evaluation each.
    pub fn evaluate(&mut self, model: &CostModel<'_>, budget: &mut Budget) -> Result<()> {
        for m in &mut self.members {
            m.cost = model.cost(&m.tour, budget)?;
        }
        Ok(())
    }

    /// Index of the cheapest member; ties go to the lowest index.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for (k, m) in self.members.iter().enumerate().skip(1) {
            if m.cost < self.members[best].cost {
                best = k;
            }
        }
        best
    }

    pub fn best(&self) -> &Member {
        &self.members[self.best_index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Accepted { slot: usize },
    Rejected { slot: usize },
    /// The budget had no evaluation left; nothing was done.
    Exhausted,
}

/// One iteration of the (mu+1)-EA. Consumes exactly one evaluation unless the
/// budget is already exhausted.
pub fn ea_step(
    pop: &mut Population,
    model: &CostModel<'_>,
    operator: Operator,
    rng: &mut Rng,
    budget: &mut Budget,
) -> Result<StepOutcome> {
    if budget.is_exhausted() {
        return Ok(StepOutcome::Exhausted);
    }
    let slot = rng.gen_range(0..pop.members.len());
    let Population { members, scratch } = pop;
    let parent = &mut members[slot];
    scratch.clear();
    scratch.extend_from_slice(parent.tour.cities());
    operator.mutate(scratch, rng)?;
    let cost = model.cost_unchecked(scratch, budget);
    if cost <= parent.cost {
        parent.tour.swap_cities(scratch);
        parent.cost = cost;
        Ok(StepOutcome::Accepted { slot })
    } else {
        Ok(StepOutcome::Rejected { slot })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub best_cost: f64,
    pub evals_used: u64,
    pub best_tour: Tour,
}

/// Runs one epoch of `budget` evaluations under `model`.
///
/// Cached costs are first refreshed under the new plan, and those `mu`
/// evaluations are part of the budget. If `budget < mu` the refresh still
/// happens and `evals_used` reports `mu`.
pub fn run_epoch(
    pop: &mut Population,
    model: &CostModel<'_>,
    budget: u64,
    operator: Operator,
    rng: &mut Rng,
    epoch: usize,
) -> Result<EpochRecord> {
    let mut b = Budget::with_limit(budget);
    pop.evaluate(model, &mut b)?;
    while ea_step(pop, model, operator, rng, &mut b)? != StepOutcome::Exhausted {}
    let best = pop.best();
    Ok(EpochRecord {
        epoch,
        best_cost: best.cost,
        evals_used: b.used(),
        best_tour: best.tour.clone(),
    })
}

/// Runs the EA across all epochs of `seq`.
///
/// Epoch 0 gets `epoch0_budget` evaluations (including the evaluation of the
/// initial population), every later epoch gets `tau`. The population carries
/// over between epochs.
pub fn run_dynamic(
    inst: &Instance,
    seq: &PackingSequence,
    cfg: &EaConfig,
    epoch0_budget: u64,
    tau: u64,
) -> Result<Vec<EpochRecord>> {
    cfg.validate()?;
    if seq.m != inst.m() {
        return Err(Error::contract(format!(
            "sequence has m={} but instance {} has {} items",
            seq.m,
            inst.name,
            inst.m()
        )));
    }
    let mut rng = seed::rng(cfg.seed);
    let mut pop = Population::random(inst.n(), cfg.mu, &mut rng);
    seq.plans
        .iter()
        .enumerate()
        .map(|(epoch, plan)| {
            let model = CostModel::new(inst, plan)?;
            let budget = if epoch == 0 { epoch0_budget } else { tau };
            run_epoch(&mut pop, &model, budget, cfg.operator, &mut rng, epoch)
        })
        .collect()
}
