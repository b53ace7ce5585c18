//! TTP benchmark files and synthetic instances in the same layout.
//!
//! Profits, capacity, speeds and renting ratio are read and kept only so files
//! survive a read/write cycle; the W-TSP model uses coordinates, item weights
//! and item homes. Item `k` in file order is bit `k` of a packing plan.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::instance::{Instance, Item, Metric, TtpHeader};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightCategory {
    /// Bounded strongly correlated: profit = weight + 100.
    Bsc,
    Uncorr,
    /// Uncorrelated with similar weights.
    Usw,
}

impl WeightCategory {
    pub fn tag(self) -> &'static str {
        match self {
            WeightCategory::Bsc => "bsc",
            WeightCategory::Uncorr => "uncorr",
            WeightCategory::Usw => "usw",
        }
    }

    fn data_type(self) -> &'static str {
        match self {
            WeightCategory::Bsc => "bounded strongly corr",
            WeightCategory::Uncorr => "uncorrelated",
            WeightCategory::Usw => "uncorrelated, similar weights",
        }
    }
}

impl fmt::Display for WeightCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for WeightCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bsc" | "bcc" => Ok(WeightCategory::Bsc),
            "uncorr" => Ok(WeightCategory::Uncorr),
            "usw" => Ok(WeightCategory::Usw),
            other => Err(Error::validation(format!(
                "unknown weight category {other:?} (expected bsc, uncorr or usw)"
            ))),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Coords,
    EdgeWeights,
    Items,
}

fn numbers(line: &str, path: &Path, lineno: usize, expect: usize) -> Result<Vec<f64>> {
    let vals = line
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::parse(path, lineno, format!("invalid number {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != expect {
        return Err(Error::parse(
            path,
            lineno,
            format!("expected {expect} columns, found {}", vals.len()),
        ));
    }
    Ok(vals)
}

fn index_field(v: f64, len: usize, what: &str, path: &Path, lineno: usize) -> Result<usize> {
    if v.fract() != 0.0 || v < 1.0 || v > len as f64 {
        return Err(Error::parse(path, lineno, format!("{what} {v} outside 1..={len}")));
    }
    Ok(v as usize - 1)
}

/// Parses TTP text; `path` is used for error context only.
pub fn parse_ttp_str(text: &str, path: &Path) -> Result<Instance> {
    let mut header = TtpHeader::default();
    let mut name = String::new();
    let mut dimension: Option<usize> = None;
    let mut n_items: Option<usize> = None;
    let mut metric: Option<Metric> = None;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut matrix: Vec<f64> = Vec::new();
    let mut items: Vec<Option<Item>> = Vec::new();
    let mut seen_coords = false;
    let mut seen_items = false;
    let mut seen_matrix = false;
    let mut section = Section::Header;
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line == "EOF" {
            continue;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            let n = dimension.ok_or_else(|| Error::parse(path, lineno, "NODE_COORD_SECTION before DIMENSION"))?;
            coords = vec![None; n];
            seen_coords = true;
            section = Section::Coords;
            continue;
        }
        if line.starts_with("EDGE_WEIGHT_SECTION") {
            dimension.ok_or_else(|| Error::parse(path, lineno, "EDGE_WEIGHT_SECTION before DIMENSION"))?;
            seen_matrix = true;
            section = Section::EdgeWeights;
            continue;
        }
        if line.starts_with("ITEMS SECTION") {
            let m = n_items.ok_or_else(|| Error::parse(path, lineno, "ITEMS SECTION before NUMBER OF ITEMS"))?;
            items = vec![None; m];
            seen_items = true;
            section = Section::Items;
            continue;
        }
        match section {
            Section::Header => {
                let (key, value) = line
                    .split_once(':')
                    .ok_or_else(|| Error::parse(path, lineno, format!("expected `KEY: value`, found {line:?}")))?;
                let value = value.trim();
                let int = |v: &str| {
                    v.parse::<usize>()
                        .map_err(|_| Error::parse(path, lineno, format!("invalid integer {v:?} for {}", key.trim())))
                };
                match key.trim() {
                    "PROBLEM NAME" | "NAME" => name = value.to_string(),
                    "KNAPSACK DATA TYPE" => header.knapsack_data_type = value.to_string(),
                    "DIMENSION" => dimension = Some(int(value)?),
                    "NUMBER OF ITEMS" => n_items = Some(int(value)?),
                    "CAPACITY OF KNAPSACK" => header.capacity = value.to_string(),
                    "MIN SPEED" => header.min_speed = value.to_string(),
                    "MAX SPEED" => header.max_speed = value.to_string(),
                    "RENTING RATIO" => header.renting_ratio = value.to_string(),
                    "EDGE_WEIGHT_TYPE" => {
                        metric = Some(value.parse().map_err(|e: Error| Error::parse(path, lineno, e.to_string()))?)
                    }
                    "EDGE_WEIGHT_FORMAT" if value == "FULL_MATRIX" => {}
                    "EDGE_WEIGHT_FORMAT" => {
                        return Err(Error::parse(path, lineno, format!("unsupported EDGE_WEIGHT_FORMAT {value:?}")))
                    }
                    other => log::debug!("{}:{lineno}: ignoring header key {other:?}", path.display()),
                }
            }
            Section::Coords => {
                let v = numbers(line, path, lineno, 3)?;
                let idx = index_field(v[0], coords.len(), "node index", path, lineno)?;
                if coords[idx].replace((v[1], v[2])).is_some() {
                    return Err(Error::parse(path, lineno, format!("duplicate node {}", idx + 1)));
                }
            }
            Section::EdgeWeights => {
                for t in line.split_whitespace() {
                    matrix.push(
                        t.parse()
                            .map_err(|_| Error::parse(path, lineno, format!("invalid distance {t:?}")))?,
                    );
                }
            }
            Section::Items => {
                let n = dimension.unwrap_or(0);
                let v = numbers(line, path, lineno, 4)?;
                let idx = index_field(v[0], items.len(), "item index", path, lineno)?;
                let home = index_field(v[3], n, "assigned node", path, lineno)?;
                if home == 0 {
                    log::warn!(
                        "{}:{lineno}: item {} is assigned to the start city 1",
                        path.display(),
                        idx + 1
                    );
                }
                let item = Item { home, weight: v[2], profit: v[1] };
                if items[idx].replace(item).is_some() {
                    return Err(Error::parse(path, lineno, format!("duplicate item {}", idx + 1)));
                }
            }
        }
    }

    let eof = last_line + 1;
    let missing = |what: &str| Error::parse(path, eof, format!("missing {what}"));
    let n = dimension.ok_or_else(|| missing("DIMENSION"))?;
    n_items.ok_or_else(|| missing("NUMBER OF ITEMS"))?;
    let metric = metric.ok_or_else(|| missing("EDGE_WEIGHT_TYPE"))?;
    if !seen_items {
        return Err(missing("ITEMS SECTION"));
    }
    let found = items.iter().filter(|i| i.is_some()).count();
    if found != items.len() {
        return Err(Error::parse(
            path,
            eof,
            format!("ITEMS SECTION has {found} rows, NUMBER OF ITEMS is {}", items.len()),
        ));
    }
    let items: Vec<Item> = items.into_iter().flatten().collect();

    let inst = if metric == Metric::Explicit {
        if !seen_matrix {
            return Err(missing("EDGE_WEIGHT_SECTION"));
        }
        if matrix.len() != n * n {
            return Err(Error::parse(
                path,
                eof,
                format!("EDGE_WEIGHT_SECTION has {} entries, DIMENSION {n} needs {}", matrix.len(), n * n),
            ));
        }
        Instance::from_matrix(name, n, matrix, items)
    } else {
        if !seen_coords {
            return Err(missing("NODE_COORD_SECTION"));
        }
        let found = coords.iter().filter(|c| c.is_some()).count();
        if found != n {
            return Err(Error::parse(
                path,
                eof,
                format!("NODE_COORD_SECTION has {found} rows, DIMENSION is {n}"),
            ));
        }
        Instance::from_coords(name, metric, coords.into_iter().flatten().collect(), items)
    };
    inst.map(|i| i.with_header(header))
        .map_err(|e| Error::parse(path, eof, e.to_string()))
}

pub fn parse_ttp(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ttp_str(&text, path)
}

/// Renders `inst` in TTP layout. Numbers use the shortest representation that
/// reads back to the same `f64`.
pub fn to_ttp_string(inst: &Instance) -> String {
    use std::fmt::Write as _;
    let h = &inst.header;
    let mut s = String::new();
    let _ = writeln!(s, "PROBLEM NAME: \t{}", inst.name);
    let _ = writeln!(s, "KNAPSACK DATA TYPE: \t{}", h.knapsack_data_type);
    let _ = writeln!(s, "DIMENSION: \t{}", inst.n());
    let _ = writeln!(s, "NUMBER OF ITEMS: \t{}", inst.m());
    let _ = writeln!(s, "CAPACITY OF KNAPSACK: \t{}", h.capacity);
    let _ = writeln!(s, "MIN SPEED: \t{}", h.min_speed);
    let _ = writeln!(s, "MAX SPEED: \t{}", h.max_speed);
    let _ = writeln!(s, "RENTING RATIO: \t{}", h.renting_ratio);
    let _ = writeln!(s, "EDGE_WEIGHT_TYPE: \t{}", inst.metric);
    match inst.coords() {
        Some(coords) => {
            s.push_str("NODE_COORD_SECTION\t(INDEX, X, Y):\n");
            for (i, (x, y)) in coords.iter().enumerate() {
                let _ = writeln!(s, "{}\t{}\t{}", i + 1, x, y);
            }
        }
        None => {
            s.push_str("EDGE_WEIGHT_FORMAT: \tFULL_MATRIX\nEDGE_WEIGHT_SECTION\n");
            for row in inst.distance_matrix().chunks(inst.n()) {
                let cells: Vec<String> = row.iter().map(f64::to_string).collect();
                let _ = writeln!(s, "{}", cells.join("\t"));
            }
        }
    }
    s.push_str("ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):\n");
    for (k, it) in inst.items().iter().enumerate() {
        let _ = writeln!(s, "{}\t{}\t{}\t{}", k + 1, it.profit, it.weight, it.home + 1);
    }
    s
}

pub fn write_ttp(inst: &Instance, path: &Path) -> Result<()> {
    fs::write(path, to_ttp_string(inst)).map_err(|e| Error::io(path, e))
}

/// Synthetic instance with uniform coordinates in `[0, coord_box]^2` and
/// `items_per_city` items on every city except the start city.
///
/// Items are numbered round-robin over cities 2..n as in the benchmark files.
/// Weights: `uncorr` uniform integers in [1, 1000], `usw` in [1000, 1010], `bsc`
/// in [1, 1000] with profit weight + 100. Synthetic files declare CEIL_2D.
pub fn gen_instance(
    n: usize,
    items_per_city: usize,
    category: WeightCategory,
    coord_box: f64,
    seed: u64,
) -> Result<Instance> {
    if n < 3 {
        return Err(Error::validation(format!("need n >= 3 cities, got {n}")));
    }
    if items_per_city < 1 {
        return Err(Error::validation("need at least one item per city"));
    }
    if !(coord_box > 0.0 && coord_box.is_finite()) {
        return Err(Error::validation(format!("coordinate box must be positive, got {coord_box}")));
    }
    let mut rng = seed::rng(seed);
    let coords = (0..n)
        .map(|_| (rng.gen_range(0.0..=coord_box), rng.gen_range(0.0..=coord_box)))
        .collect();
    let m = items_per_city * (n - 1);
    let items: Vec<Item> = (0..m)
        .map(|k| {
            let home = 1 + k % (n - 1);
            let (weight, profit) = match category {
                WeightCategory::Uncorr => (rng.gen_range(1..=1000), rng.gen_range(1..=1000)),
                WeightCategory::Usw => (rng.gen_range(1000..=1010), rng.gen_range(1..=1000)),
                WeightCategory::Bsc => {
                    let w = rng.gen_range(1..=1000);
                    (w, w + 100)
                }
            };
            Item { home, weight: weight as f64, profit: profit as f64 }
        })
        .collect();
    let capacity = (items.iter().map(|i| i.weight).sum::<f64>() / 2.0).round();
    let header = TtpHeader {
        knapsack_data_type: category.data_type().into(),
        capacity: capacity.to_string(),
        ..TtpHeader::default()
    };
    let name = format!("synth-n{n}-{}-s{seed}", category.tag());
    Ok(Instance::from_coords(name, Metric::Ceil2d, coords, items)?.with_header(header))
}
