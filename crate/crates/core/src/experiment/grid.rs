//! Runs a full experimental grid.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use super::baseline::{offline_baseline, BaselineCache, BaselineKey};
use super::config::{AlgorithmSpec, Bounds, GridConfig};
use super::relative_perf;
use super::results::ResultRow;
use crate::dynamics::{generate_sequence, DynamicsConfig, PackingSequence};
use crate::ea::{run_dynamic, EaConfig, EpochRecord};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::seed::{content_hash, derive_seed};
use crate::ttpio;

#[derive(Debug, Clone, Default)]
pub struct GridOptions {
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    /// Directory for cached baselines; `None` keeps them in memory only.
    pub cache_dir: Option<PathBuf>,
}

struct LoadedInstance {
    label: String,
    hash: String,
    inst: Instance,
}

fn load_instances(paths: &[PathBuf]) -> Result<Vec<LoadedInstance>> {
    paths
        .iter()
        .map(|p| {
            let inst = ttpio::parse_ttp(p)?;
            let bytes = std::fs::read(p).map_err(|e| Error::io(p, e))?;
            Ok(LoadedInstance { label: instance_label(p), hash: content_hash(&bytes), inst })
        })
        .collect()
}

/// The instance column value: the file stem, since TTP problem names are
/// shared between instances built on the same TSP.
fn instance_label(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Hash identifying a grid run: the config plus the content of every instance.
pub fn fingerprint(cfg: &GridConfig) -> Result<String> {
    let mut text = format!("dwtsp {}\n{}", env!("CARGO_PKG_VERSION"), cfg.to_toml());
    for p in &cfg.instances {
        let bytes = std::fs::read(p).map_err(|e| Error::io(p, e))?;
        text.push_str(&format!("{}\n", content_hash(&bytes)));
    }
    Ok(content_hash(text.as_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct SequenceId {
    inst: usize,
    bounds: Bounds,
    c: u32,
    seq: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct SettingId {
    inst: usize,
    bounds: Bounds,
    c: u32,
    tau: u64,
}

#[derive(Debug, Clone, Copy)]
struct RunTask {
    setting: SettingId,
    alg: AlgorithmSpec,
    seq: usize,
    rep: usize,
}

/// Runs every (instance, bounds, c, tau, algorithm, sequence, repetition)
/// combination and returns rows in that nesting order, epochs innermost.
///
/// Packing sequences depend on (instance, bounds, c, sequence index) only, so
/// every tau and algorithm sees the same plans and each distinct plan needs a
/// single baseline. A setting in which any run fails is replaced by one
/// diagnostic row per algorithm.
pub fn run_grid(cfg: &GridConfig, opts: &GridOptions) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let start = Instant::now();
    let instances = load_instances(&cfg.instances)?;
    let bounds = cfg.bounds()?;
    let algorithms = cfg.algorithm_specs()?;
    let cache = opts.cache_dir.as_ref().map(BaselineCache::new).transpose()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::validation(format!("thread pool: {e}")))?;

    let mut seq_ids = Vec::new();
    for inst in 0..instances.len() {
        for &b in &bounds {
            for &c in &cfg.c_list {
                for seq in 0..cfg.sequences_per_setting {
                    seq_ids.push(SequenceId { inst, bounds: b, c, seq });
                }
            }
        }
    }
    let sequences: BTreeMap<SequenceId, std::result::Result<PackingSequence, String>> = seq_ids
        .iter()
        .map(|&id| {
            let li = &instances[id.inst];
            let dcfg = DynamicsConfig {
                lower: id.bounds.lower,
                upper: id.bounds.upper,
                magnitude: id.c,
                tau: 1,
                epochs: cfg.epochs,
                seed: derive_seed(&[
                    cfg.master_seed.to_string(),
                    "sequence".into(),
                    li.label.clone(),
                    id.bounds.to_string(),
                    id.c.to_string(),
                    id.seq.to_string(),
                ]),
            };
            (id, generate_sequence(li.inst.m(), &dcfg).map_err(|e| e.to_string()))
        })
        .collect();

    // One baseline per distinct (instance, plan).
    let mut wanted: BTreeMap<(usize, String), &crate::plan::PackingPlan> = BTreeMap::new();
    for (id, seq) in &sequences {
        if let Ok(seq) = seq {
            for plan in &seq.plans {
                wanted.entry((id.inst, content_hash(plan.to_string().as_bytes()))).or_insert(plan);
            }
        }
    }
    log::info!("computing {} baselines", wanted.len());
    let wanted: Vec<_> = wanted.into_iter().collect();
    let baselines: HashMap<(usize, String), std::result::Result<f64, String>> = pool.install(|| {
        wanted
            .par_iter()
            .map(|((inst, plan_hash), plan)| {
                let li = &instances[*inst];
                let key = BaselineKey {
                    instance_hash: li.hash.clone(),
                    plan_hash: plan_hash.clone(),
                    reps: cfg.baseline_reps,
                    evals: cfg.baseline_evals,
                    seed: derive_seed(&[cfg.master_seed.to_string(), "baseline".into(), li.hash.clone(), plan_hash.clone()]),
                };
                let value = match cache.as_ref().and_then(|c| c.get(&key)) {
                    Some(v) => Ok(v),
                    None => offline_baseline(&li.inst, plan, key.reps, key.evals, key.seed).and_then(|v| {
                        if let Some(c) = &cache {
                            c.put(&key, v)?;
                        }
                        Ok(v)
                    }),
                };
                ((*inst, plan_hash.clone()), value.map_err(|e| e.to_string()))
            })
            .collect()
    });
    log::info!("baselines done after {:.1?}", start.elapsed());

    let mut tasks = Vec::new();
    for inst in 0..instances.len() {
        for &b in &bounds {
            for &c in &cfg.c_list {
                for &tau in &cfg.tau_list {
                    let setting = SettingId { inst, bounds: b, c, tau };
                    for &alg in &algorithms {
                        for seq in 0..cfg.sequences_per_setting {
                            for rep in 0..cfg.repetitions {
                                tasks.push(RunTask { setting, alg, seq, rep });
                            }
                        }
                    }
                }
            }
        }
    }
    log::info!("running {} EA runs", tasks.len());
    let outcomes: Vec<std::result::Result<Vec<ResultRow>, String>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| run_task(task, cfg, &instances, &sequences, &baselines))
            .collect()
    });
    log::info!("grid finished after {:.1?}", start.elapsed());

    let mut rows = Vec::new();
    let mut i = 0;
    while i < tasks.len() {
        let setting = tasks[i].setting;
        let end = tasks[i..].iter().position(|t| t.setting != setting).map_or(tasks.len(), |k| i + k);
        match outcomes[i..end].iter().find_map(|o| o.as_ref().err()) {
            None => {
                for o in &outcomes[i..end] {
                    rows.extend(o.as_ref().expect("checked above").iter().cloned());
                }
            }
            Some(err) => {
                log::error!(
                    "setting {} L:U={} c={} tau={} failed: {err}",
                    instances[setting.inst].label,
                    setting.bounds,
                    setting.c,
                    setting.tau
                );
                for &alg in &algorithms {
                    rows.push(diagnostic_row(&instances[setting.inst].label, setting, alg));
                }
            }
        }
        i = end;
    }
    Ok(rows)
}

fn diagnostic_row(label: &str, s: SettingId, alg: AlgorithmSpec) -> ResultRow {
    ResultRow {
        instance: label.to_string(),
        mu: alg.mu,
        operator: alg.operator,
        tau: s.tau,
        lower: s.bounds.lower,
        upper: s.bounds.upper,
        c: s.c,
        seq_id: 0,
        rep_id: 0,
        epoch: None,
        best_cost: None,
        baseline_cost: None,
        perf: None,
        evals_used: None,
    }
}

fn run_task(
    task: &RunTask,
    cfg: &GridConfig,
    instances: &[LoadedInstance],
    sequences: &BTreeMap<SequenceId, std::result::Result<PackingSequence, String>>,
    baselines: &HashMap<(usize, String), std::result::Result<f64, String>>,
) -> std::result::Result<Vec<ResultRow>, String> {
    let s = task.setting;
    let li = &instances[s.inst];
    let seq = sequences[&SequenceId { inst: s.inst, bounds: s.bounds, c: s.c, seq: task.seq }].as_ref()?;
    let ea = EaConfig {
        mu: task.alg.mu,
        operator: task.alg.operator,
        seed: derive_seed(&[
            cfg.master_seed.to_string(),
            "ea".into(),
            li.label.clone(),
            s.bounds.to_string(),
            s.c.to_string(),
            s.tau.to_string(),
            task.alg.to_string(),
            task.seq.to_string(),
            task.rep.to_string(),
        ]),
    };
    let records: Vec<EpochRecord> =
        run_dynamic(&li.inst, seq, &ea, cfg.epoch0_evals, s.tau).map_err(|e| e.to_string())?;
    records
        .iter()
        .map(|rec| {
            let plan_hash = content_hash(seq.plans[rec.epoch].to_string().as_bytes());
            let baseline = baselines[&(s.inst, plan_hash)].clone()?;
            Ok(ResultRow {
                instance: li.label.clone(),
                mu: task.alg.mu,
                operator: task.alg.operator,
                tau: s.tau,
                lower: s.bounds.lower,
                upper: s.bounds.upper,
                c: s.c,
                seq_id: task.seq,
                rep_id: task.rep,
                epoch: Some(rec.epoch),
                best_cost: Some(rec.best_cost),
                baseline_cost: Some(baseline),
                perf: relative_perf(rec.best_cost, baseline).ok(),
                evals_used: Some(rec.evals_used),
            })
        })
        .collect()
}
