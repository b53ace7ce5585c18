//! Offline baselines: the best static-problem cost found by repeated
//! (20+1)-EA[inversion] runs on a single packing plan.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::cost::CostModel;
use crate::ea::{run_epoch, Operator, Population};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::plan::PackingPlan;
use crate::seed;

pub const BASELINE_MU: usize = 20;
pub const BASELINE_OPERATOR: Operator = Operator::Inversion;

/// Minimum final cost over `reps` independent runs of `evals` evaluations each.
pub fn offline_baseline(inst: &Instance, plan: &PackingPlan, reps: usize, evals: u64, seed: u64) -> Result<f64> {
    if reps == 0 {
        return Err(Error::contract("baseline needs at least one repetition"));
    }
    let model = CostModel::new(inst, plan)?;
    let mut best = f64::INFINITY;
    for rep in 0..reps {
        let mut rng = seed::rng(seed::derive_seed(&[seed.to_string(), "baseline-rep".into(), rep.to_string()]));
        let mut pop = Population::random(inst.n(), BASELINE_MU, &mut rng);
        let rec = run_epoch(&mut pop, &model, evals, BASELINE_OPERATOR, &mut rng, 0)?;
        best = best.min(rec.best_cost);
    }
    Ok(best)
}

/// Identifies a cached baseline: instance and plan by content hash plus the
/// parameters the value depends on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaselineKey {
    pub instance_hash: String,
    pub plan_hash: String,
    pub reps: usize,
    pub evals: u64,
    pub seed: u64,
}

impl BaselineKey {
    fn file_name(&self) -> String {
        let id = seed::content_hash(self.describe().as_bytes());
        format!("baseline-{}.txt", &id[..32])
    }

    fn describe(&self) -> String {
        format!(
            "instance={}\nplan={}\nreps={}\nevals={}\nmu={}\noperator={}\nseed={}\n",
            self.instance_hash, self.plan_hash, self.reps, self.evals, BASELINE_MU, BASELINE_OPERATOR, self.seed
        )
    }
}

/// One small text file per baseline in a directory.
#[derive(Debug, Clone)]
pub struct BaselineCache {
    dir: PathBuf,
}

impl BaselineCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(BaselineCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Returns the cached cost, or `None` if absent or written for a different key.
    pub fn get(&self, key: &BaselineKey) -> Option<f64> {
        let text = std::fs::read_to_string(self.dir.join(key.file_name())).ok()?;
        let (cost_line, rest) = text.split_once('\n')?;
        if rest != key.describe() {
            return None;
        }
        cost_line.strip_prefix("cost=")?.parse().ok()
    }

    pub fn put(&self, key: &BaselineKey, cost: f64) -> Result<()> {
        let path = self.dir.join(key.file_name());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        write!(tmp, "cost={cost:?}\n{}", key.describe()).map_err(|e| Error::io(&path, e))?;
        tmp.persist(&path).map_err(|e| Error::io(&path, e.error))?;
        Ok(())
    }
}
