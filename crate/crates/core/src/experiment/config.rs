//! Grid configuration.
//!
//! Config files are TOML. Keys match the `grid` CLI flags one-to-one
//! (`bounds_list` <-> `--bounds-list`) and unknown keys are rejected:
//!
//! ```toml
//! instances = ["eil101_n500_uncorr_01.ttp"]   # relative to the config file
//! bounds_list = ["30:70", "70:90"]            # "L:U", percent of m
//! c_list = [2, 5, 10]
//! tau_list = [10000, 75000]
//! algorithms = ["1:inversion", "20:jump"]     # "mu:operator"
//! sequences_per_setting = 30
//! repetitions = 1
//! master_seed = 1
//! epochs = 30
//! epoch0_evals = 50000
//! baseline_reps = 10
//! baseline_evals = 1000000
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ea::Operator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bounds {
    pub lower: u32,
    pub upper: u32,
}

impl FromStr for Bounds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::validation(format!("bounds must look like `30:70`, got {s:?}"));
        let (l, u) = s.split_once(':').ok_or_else(bad)?;
        let b = Bounds {
            lower: l.trim().parse().map_err(|_| bad())?,
            upper: u.trim().parse().map_err(|_| bad())?,
        };
        if b.lower >= b.upper || b.upper > 100 {
            return Err(Error::validation(format!("bounds need 0 <= L < U <= 100, got {s:?}")));
        }
        Ok(b)
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lower, self.upper)
    }
}

/// A (mu+1)-EA variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgorithmSpec {
    pub mu: usize,
    pub operator: Operator,
}

impl AlgorithmSpec {
    /// The six variants compared in the reference experiments, in table order.
    pub fn standard_six() -> Vec<AlgorithmSpec> {
        [1, 20]
            .into_iter()
            .flat_map(|mu| Operator::ALL.into_iter().map(move |operator| AlgorithmSpec { mu, operator }))
            .collect()
    }

    pub fn label(&self) -> String {
        format!("({}+1)-EA[{}]", self.mu, self.operator)
    }
}

impl FromStr for AlgorithmSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::validation(format!("algorithm must look like `20:jump`, got {s:?}"));
        let (mu, op) = s.split_once(':').ok_or_else(bad)?;
        let mu: usize = mu.trim().parse().map_err(|_| bad())?;
        if mu == 0 {
            return Err(Error::validation("algorithm mu must be at least 1"));
        }
        Ok(AlgorithmSpec { mu, operator: op.trim().parse()? })
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.mu, self.operator)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub instances: Vec<PathBuf>,
    pub bounds_list: Vec<String>,
    pub c_list: Vec<u32>,
    pub tau_list: Vec<u64>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<String>,
    #[serde(default = "default_sequences")]
    pub sequences_per_setting: usize,
    #[serde(default = "default_one")]
    pub repetitions: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_epoch0")]
    pub epoch0_evals: u64,
    #[serde(default = "default_baseline_reps")]
    pub baseline_reps: usize,
    #[serde(default = "default_baseline_evals")]
    pub baseline_evals: u64,
}

fn default_algorithms() -> Vec<String> {
    AlgorithmSpec::standard_six().iter().map(ToString::to_string).collect()
}
fn default_sequences() -> usize {
    30
}
fn default_one() -> usize {
    1
}
fn default_epochs() -> usize {
    30
}
fn default_epoch0() -> u64 {
    50_000
}
fn default_baseline_reps() -> usize {
    10
}
fn default_baseline_evals() -> u64 {
    1_000_000
}

impl GridConfig {
    /// A config with the reference protocol's defaults and the given grid axes.
    pub fn new(instances: Vec<PathBuf>, bounds: &[Bounds], c_list: Vec<u32>, tau_list: Vec<u64>) -> Self {
        GridConfig {
            instances,
            bounds_list: bounds.iter().map(ToString::to_string).collect(),
            c_list,
            tau_list,
            algorithms: default_algorithms(),
            sequences_per_setting: default_sequences(),
            repetitions: default_one(),
            master_seed: 0,
            epochs: default_epochs(),
            epoch0_evals: default_epoch0(),
            baseline_reps: default_baseline_reps(),
            baseline_evals: default_baseline_evals(),
        }
    }

    /// Parses TOML; relative instance paths are resolved against `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: GridConfig =
            toml::from_str(text).map_err(|e| Error::validation(format!("grid config: {}", e.message())))?;
        for p in &mut cfg.instances {
            if p.is_relative() {
                *p = base_dir.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml(&text, base).map_err(|e| match e {
            Error::Validation(msg) => Error::validation(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("grid config serializes")
    }

    pub fn bounds(&self) -> Result<Vec<Bounds>> {
        self.bounds_list.iter().map(|s| s.parse()).collect()
    }

    pub fn algorithm_specs(&self) -> Result<Vec<AlgorithmSpec>> {
        self.algorithms.iter().map(|s| s.parse()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let nonempty = [
            ("instances", self.instances.is_empty()),
            ("bounds_list", self.bounds_list.is_empty()),
            ("c_list", self.c_list.is_empty()),
            ("tau_list", self.tau_list.is_empty()),
            ("algorithms", self.algorithms.is_empty()),
        ];
        if let Some((key, _)) = nonempty.iter().find(|(_, empty)| *empty) {
            return Err(Error::validation(format!("{key} must not be empty")));
        }
        self.bounds()?;
        self.algorithm_specs()?;
        if self.c_list.contains(&0) {
            return Err(Error::validation("c_list entries must be positive"));
        }
        if self.tau_list.contains(&0) {
            return Err(Error::validation("tau_list entries must be positive"));
        }
        if self.sequences_per_setting == 0 || self.repetitions == 0 {
            return Err(Error::validation("sequences_per_setting and repetitions must be positive"));
        }
        if self.baseline_reps == 0 || self.baseline_evals == 0 {
            return Err(Error::validation("baseline_reps and baseline_evals must be positive"));
        }
        if let Some(missing) = self.instances.iter().find(|p| !p.is_file()) {
            return Err(Error::validation(format!("instance file {} does not exist", missing.display())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves_paths() {
        let text = r#"
instances = ["a.ttp", "/abs/b.ttp"]
bounds_list = ["30:70", "70:90"]
c_list = [2, 5, 10]
tau_list = [100, 1000]
sequences_per_setting = 5
master_seed = 9
"#;
        let cfg = GridConfig::from_toml(text, Path::new("/cfg")).unwrap();
        assert_eq!(cfg.instances, vec![PathBuf::from("/cfg/a.ttp"), PathBuf::from("/abs/b.ttp")]);
        assert_eq!(cfg.bounds().unwrap()[1], Bounds { lower: 70, upper: 90 });
        assert_eq!(cfg.algorithm_specs().unwrap(), AlgorithmSpec::standard_six());
        assert_eq!((cfg.epochs, cfg.epoch0_evals, cfg.baseline_reps), (30, 50_000, 10));
        assert_eq!(cfg.baseline_evals, 1_000_000);
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = r#"
instances = []
bounds_list = []
c_list = []
tau_list = []
colour = "red"
"#;
        let err = GridConfig::from_toml(text, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
    }

    #[test]
    fn spec_strings() {
        assert_eq!("20:jump".parse::<AlgorithmSpec>().unwrap().label(), "(20+1)-EA[jump]");
        assert!("0:jump".parse::<AlgorithmSpec>().is_err());
        assert!("70:30".parse::<Bounds>().is_err());
        assert!("30-70".parse::<Bounds>().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = GridConfig::new(vec!["x.ttp".into()], &[Bounds { lower: 30, upper: 70 }], vec![2], vec![500]);
        let back = GridConfig::from_toml(&cfg.to_toml(), Path::new("")).unwrap();
        assert_eq!(back, cfg);
    }
}
