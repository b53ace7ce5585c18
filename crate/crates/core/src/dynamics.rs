//! Dynamic item availability as a bounded random walk over packing plans.
//!
//! Each change flips every active item off with probability `r / |x|_1` and every
//! inactive item on with probability `r / |x|_0`, where `r = c * m / 100`. Both
//! flip classes change `r` items in expectation, so the number of active items
//! drifts without bias while about `2r` items change status. One-sided guards
//! stop the walk from leaving `[L, U]` percent of `m` further once it has reached
//! a boundary.

use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::plan::PackingPlan;
use crate::seed::{self, Rng};

pub const SEQUENCE_MAGIC: &str = "DWTSP-SEQ 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DynamicsConfig {
    /// Lower bound on active items, percent of `m`.
    pub lower: u32,
    /// Upper bound on active items, percent of `m`.
    pub upper: u32,
    /// Magnitude of change `c`, percent of `m` per flip class.
    pub magnitude: u32,
    /// Fitness evaluations per epoch.
    pub tau: u64,
    /// Number of changes; a sequence holds `epochs + 1` plans.
    pub epochs: usize,
    pub seed: u64,
}

impl DynamicsConfig {
    pub fn validate(&self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::validation("dynamics need at least one item"));
        }
        if self.lower >= self.upper || self.upper > 100 {
            return Err(Error::validation(format!(
                "bounds must satisfy 0 <= L < U <= 100, got [{}, {}]",
                self.lower, self.upper
            )));
        }
        // r = c*m/100 >= 1
        if (self.magnitude as u64) * (m as u64) < 100 {
            return Err(Error::validation(format!(
                "magnitude c={} gives r = c*m/100 < 1 for m={m}",
                self.magnitude
            )));
        }
        if self.tau == 0 {
            return Err(Error::validation("tau must be at least 1"));
        }
        Ok(())
    }

    /// Expected flips per bit class, `r = c * m / 100` (not rounded).
    pub fn expected_flips(&self, m: usize) -> f64 {
        self.magnitude as f64 * m as f64 / 100.0
    }

    /// Active-item count of the initial plan: `round((L + U) / 2 * m / 100)`.
    pub fn initial_ones(&self, m: usize) -> usize {
        let num = (self.lower as u64 + self.upper as u64) * m as u64;
        ((num + 100) / 200) as usize
    }

    /// Whether 1-bits may be cleared: `|x|_1 > L * m / 100`, compared exactly.
    pub fn may_clear(&self, ones: usize, m: usize) -> bool {
        (ones as u64) * 100 > self.lower as u64 * m as u64
    }

    /// Whether 0-bits may be set: `|x|_1 < U * m / 100`, compared exactly.
    pub fn may_set(&self, ones: usize, m: usize) -> bool {
        (ones as u64) * 100 < self.upper as u64 * m as u64
    }
}

/// Initial plan with exactly [`DynamicsConfig::initial_ones`] active items at
/// uniformly random positions.
pub fn initial_plan(m: usize, cfg: &DynamicsConfig, rng: &mut Rng) -> PackingPlan {
    let k = cfg.initial_ones(m).min(m);
    let mut bits = vec![false; m];
    for i in index::sample(rng, m, k) {
        bits[i] = true;
    }
    PackingPlan::new(bits)
}

/// One dynamic change applied to `x`.
///
/// Bits are scanned in ascending order with one uniform draw per bit, whatever
/// the guards say, so the generator state advances by exactly `m` draws.
pub fn next_plan(x: &PackingPlan, cfg: &DynamicsConfig, rng: &mut Rng) -> PackingPlan {
    let m = x.len();
    let ones = x.ones();
    let zeros = m - ones;
    let r = cfg.expected_flips(m);
    let p_clear = if cfg.may_clear(ones, m) && ones > 0 {
        (r / ones as f64).min(1.0)
    } else {
        0.0
    };
    let p_set = if cfg.may_set(ones, m) && zeros > 0 {
        (r / zeros as f64).min(1.0)
    } else {
        0.0
    };
    let bits = x
        .bits()
        .iter()
        .map(|&b| {
            let u: f64 = rng.gen();
            if b {
                u >= p_clear
            } else {
                u < p_set
            }
        })
        .collect();
    PackingPlan::new(bits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingSequence {
    pub m: usize,
    pub config: DynamicsConfig,
    pub plans: Vec<PackingPlan>,
}

/// Materializes `epochs + 1` plans from `cfg.seed`.
pub fn generate_sequence(m: usize, cfg: &DynamicsConfig) -> Result<PackingSequence> {
    cfg.validate(m)?;
    let mut rng = seed::rng(cfg.seed);
    let mut plans = Vec::with_capacity(cfg.epochs + 1);
    plans.push(initial_plan(m, cfg, &mut rng));
    for e in 0..cfg.epochs {
        let next = next_plan(&plans[e], cfg, &mut rng);
        plans.push(next);
    }
    Ok(PackingSequence { m, config: *cfg, plans })
}

impl PackingSequence {
    /// Active items per epoch.
    pub fn ones_trajectory(&self) -> Vec<usize> {
        self.plans.iter().map(PackingPlan::ones).collect()
    }

    /// `HD(x^0, x^t)` per epoch.
    pub fn hamming_to_initial(&self) -> Vec<usize> {
        let first = &self.plans[0];
        self.plans
            .iter()
            .map(|p| first.hamming(p).expect("plans share length"))
            .collect()
    }

    /// `HD(x^t, x^{t+1})` for consecutive epochs.
    pub fn hamming_successive(&self) -> Vec<usize> {
        self.plans
            .windows(2)
            .map(|w| w[0].hamming(&w[1]).expect("plans share length"))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::with_capacity((self.m + 1) * self.plans.len() + 128);
        out.push_str(SEQUENCE_MAGIC);
        out.push('\n');
        out.push_str(&format!(
            "m={} L={} U={} c={} tau={} epochs={} seed={}\n",
            self.m, c.lower, c.upper, c.magnitude, c.tau, c.epochs, c.seed
        ));
        for p in &self.plans {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, msg: String| Error::parse(path, line, msg);
        if text.contains('\r') {
            return Err(err(1, "CR characters are not allowed (LF line endings only)".into()));
        }
        let body = text
            .strip_suffix('\n')
            .ok_or_else(|| err(1, "file must end with a newline".into()))?;
        let mut lines = body.split('\n');
        if lines.next() != Some(SEQUENCE_MAGIC) {
            return Err(err(1, format!("expected header {SEQUENCE_MAGIC:?}")));
        }
        let header = lines.next().ok_or_else(|| err(2, "missing parameter line".into()))?;
        let keys = ["m", "L", "U", "c", "tau", "epochs", "seed"];
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != keys.len() {
            return Err(err(2, format!("expected {} parameters, found {}", keys.len(), fields.len())));
        }
        let mut vals = [0u64; 7];
        for (k, (field, key)) in fields.iter().zip(keys).enumerate() {
            let v = field
                .strip_prefix(key)
                .and_then(|s| s.strip_prefix('='))
                .ok_or_else(|| err(2, format!("expected `{key}=<int>`, found {field:?}")))?;
            vals[k] = v
                .parse()
                .map_err(|_| err(2, format!("invalid integer for {key}: {v:?}")))?;
        }
        let narrow = |v: u64, key: &str| u32::try_from(v).map_err(|_| err(2, format!("{key} out of range")));
        let m = vals[0] as usize;
        let config = DynamicsConfig {
            lower: narrow(vals[1], "L")?,
            upper: narrow(vals[2], "U")?,
            magnitude: narrow(vals[3], "c")?,
            tau: vals[4],
            epochs: vals[5] as usize,
            seed: vals[6],
        };
        let mut plans = Vec::with_capacity(config.epochs + 1);
        for (k, line) in lines.enumerate() {
            let lineno = k + 3;
            if line.len() != m {
                return Err(err(lineno, format!("plan has length {}, expected m={m}", line.len())));
            }
            plans.push(line.parse().map_err(|e: Error| err(lineno, e.to_string()))?);
        }
        if plans.len() != config.epochs + 1 {
            return Err(err(
                plans.len() + 2,
                format!("found {} plans, expected epochs+1 = {}", plans.len(), config.epochs + 1),
            ));
        }
        Ok(PackingSequence { m, config, plans })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, path)
    }
}
