use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand};

use dwtsp::analysis::{rank_algorithms, tour_diff, write_stats_csv, write_tour_diff_csv};
use dwtsp::dynamics::{generate_sequence, DynamicsConfig, PackingSequence};
use dwtsp::ea::{run_dynamic, EaConfig, Operator};
use dwtsp::experiment::{
    fingerprint, format_float, offline_baseline, read_results_csv, read_run_csv, run_grid, write_results_csv,
    write_run_csv, AlgorithmSpec, Bounds, GridConfig, GridOptions,
};
use dwtsp::seed::{content_hash, derive_seed};
use dwtsp::ttpio::{self, WeightCategory};
use dwtsp::Error;

/// Dynamic node-weighted TSP: instance and dynamics generation, evolutionary
/// reoptimization runs, offline baselines and statistical analysis.
#[derive(Debug, Parser)]
#[command(name = "dwtsp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic TTP instance with CEIL_2D coordinates.
    GenInstance(GenInstanceArgs),
    /// Generate a packing-plan sequence.
    GenDynamics(GenDynamicsArgs),
    /// Run one (mu+1)-EA over a packing-plan sequence.
    Run(RunArgs),
    /// Compute offline baselines for every plan of a sequence.
    Baseline(BaselineArgs),
    /// Run a full experimental grid and write the results table.
    Grid(GridArgs),
    /// Compare algorithms per cell of a results table.
    Analyze(AnalyzeArgs),
    /// Per-city position and weight changes between the epochs of a run.
    TourDiff(TourDiffArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file, replaced atomically.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GenInstanceArgs {
    /// Number of cities, including the start city.
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    n: u64,
    /// Items per non-start city.
    #[arg(long, default_value_t = 1, value_parser = parse_positive)]
    items_per_city: u64,
    /// Weight category: bsc, uncorr or usw.
    #[arg(long, default_value = "uncorr", value_parser = parse_category)]
    category: WeightCategory,
    /// Coordinates are drawn from [0, coord_box]^2.
    #[arg(long, default_value_t = 1000.0)]
    coord_box: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct GenDynamicsArgs {
    /// Number of items.
    #[arg(long, value_parser = parse_positive)]
    m: u64,
    /// Lower bound on active items, percent of m.
    #[arg(long = "L", value_parser = clap::value_parser!(u32).range(0..=100))]
    lower: u32,
    /// Upper bound on active items, percent of m.
    #[arg(long = "U", value_parser = clap::value_parser!(u32).range(0..=100))]
    upper: u32,
    /// Magnitude: expected flips per change are c*m/100.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    c: u32,
    /// Evaluations between changes; recorded in the sequence header.
    #[arg(long, value_parser = parse_positive)]
    tau: u64,
    /// Number of changes; the sequence holds epochs + 1 plans.
    #[arg(long, default_value_t = 30)]
    epochs: usize,
    /// Also write per-epoch ones and Hamming distances to this CSV.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    sequence: PathBuf,
    /// Population size.
    #[arg(long, value_parser = parse_positive)]
    mu: u64,
    /// Mutation operator: inversion, exchange or jump.
    #[arg(long, value_parser = parse_operator)]
    operator: Operator,
    /// Evaluations for the first epoch, including the initial population.
    #[arg(long, default_value_t = 50_000, value_parser = parse_positive)]
    epoch0_evals: u64,
    /// Evaluations per later epoch; defaults to the sequence's tau.
    #[arg(long, value_parser = parse_positive)]
    tau: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct BaselineArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    sequence: PathBuf,
    /// Only this epoch's plan.
    #[arg(long)]
    epoch: Option<usize>,
    /// Independent (20+1)-EA[inversion] runs per plan.
    #[arg(long, default_value_t = 10, value_parser = parse_positive)]
    reps: u64,
    /// Evaluations per run.
    #[arg(long, default_value_t = 1_000_000, value_parser = parse_positive)]
    evals: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// TOML config; the flags below override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    instances: Vec<PathBuf>,
    /// Bounds as L:U, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_bounds)]
    bounds_list: Vec<Bounds>,
    #[arg(long, value_delimiter = ',')]
    c_list: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    tau_list: Vec<u64>,
    /// Algorithms as mu:operator, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algorithms: Vec<AlgorithmSpec>,
    #[arg(long)]
    sequences_per_setting: Option<usize>,
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    epoch0_evals: Option<u64>,
    #[arg(long)]
    baseline_reps: Option<usize>,
    #[arg(long)]
    baseline_evals: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Baseline cache directory.
    #[arg(long, env = "DWTSP_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Master seed (the config's master_seed).
    #[arg(long, visible_alias = "master-seed")]
    seed: Option<u64>,
    /// Output results CSV, replaced atomically.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Results CSV written by `grid`.
    #[arg(long)]
    results: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct TourDiffArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    sequence: PathBuf,
    /// Run CSV written by `run`.
    #[arg(long)]
    run: PathBuf,
    /// Measure positions and new edges against this epoch's tour instead of
    /// the previous epoch's.
    #[arg(long)]
    reference_epoch: Option<usize>,
    #[command(flatten)]
    common: Common,
}

fn parse_positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_category(s: &str) -> Result<WeightCategory, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_operator(s: &str) -> Result<Operator, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_bounds(s: &str) -> Result<Bounds, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_algorithm(s: &str) -> Result<AlgorithmSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type CmdResult = Result<(), Failure>;

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e| Error::Io { path: path.to_path_buf(), source: e };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn gen_instance(a: GenInstanceArgs) -> CmdResult {
    if !(a.coord_box > 0.0 && a.coord_box.is_finite()) {
        return Err(Failure::Usage("--coord-box must be positive".into()));
    }
    let inst = ttpio::gen_instance(a.n as usize, a.items_per_city as usize, a.category, a.coord_box, a.common.seed)?;
    write_atomic(&a.common.out, ttpio::to_ttp_string(&inst).as_bytes())?;
    log::info!("wrote {} ({} cities, {} items)", a.common.out.display(), inst.n(), inst.m());
    Ok(())
}

fn gen_dynamics(a: GenDynamicsArgs) -> CmdResult {
    let cfg = DynamicsConfig {
        lower: a.lower,
        upper: a.upper,
        magnitude: a.c,
        tau: a.tau,
        epochs: a.epochs,
        seed: a.common.seed,
    };
    let seq = generate_sequence(a.m as usize, &cfg)?;
    if let Some(path) = &a.diagnostics {
        let ones = seq.ones_trajectory();
        let to_initial = seq.hamming_to_initial();
        let successive = seq.hamming_successive();
        let mut text = String::from("epoch,ones,hamming_to_initial,hamming_successive\n");
        for e in 0..ones.len() {
            let succ = if e == 0 { "NA".to_string() } else { successive[e - 1].to_string() };
            text.push_str(&format!("{e},{},{},{succ}\n", ones[e], to_initial[e]));
        }
        write_atomic(path, text.as_bytes())?;
    }
    write_atomic(&a.common.out, seq.to_text().as_bytes())?;
    log::info!("wrote {} ({} plans)", a.common.out.display(), seq.plans.len());
    Ok(())
}

fn run(a: RunArgs) -> CmdResult {
    let inst = ttpio::parse_ttp(&a.instance)?;
    let seq = PackingSequence::read(&a.sequence)?;
    let tau = a.tau.unwrap_or(seq.config.tau);
    let cfg = EaConfig { mu: a.mu as usize, operator: a.operator, seed: a.common.seed };
    log::info!("run mu={} operator={} tau={tau} epoch0_evals={} seed={}", cfg.mu, cfg.operator, a.epoch0_evals, cfg.seed);
    let records = run_dynamic(&inst, &seq, &cfg, a.epoch0_evals, tau)?;
    let mut buf = Vec::new();
    write_run_csv(&records, &mut buf)?;
    write_atomic(&a.common.out, &buf)?;
    Ok(())
}

fn baseline(a: BaselineArgs) -> CmdResult {
    let inst = ttpio::parse_ttp(&a.instance)?;
    let seq = PackingSequence::read(&a.sequence)?;
    let epochs: Vec<usize> = match a.epoch {
        Some(e) if e < seq.plans.len() => vec![e],
        Some(e) => {
            return Err(Failure::Data(Error::Validation(format!(
                "epoch {e} not in sequence with {} plans",
                seq.plans.len()
            ))))
        }
        None => (0..seq.plans.len()).collect(),
    };
    let mut text = String::from("epoch,baseline_cost\n");
    for e in epochs {
        let seed = derive_seed(&[a.common.seed.to_string(), "baseline".into(), e.to_string()]);
        let cost = offline_baseline(&inst, &seq.plans[e], a.reps as usize, a.evals, seed)?;
        log::info!("epoch {e}: baseline {cost}");
        text.push_str(&format!("{e},{}\n", format_float(cost)));
    }
    write_atomic(&a.common.out, text.as_bytes())?;
    Ok(())
}

fn grid(a: GridArgs) -> CmdResult {
    let mut cfg = match &a.config {
        Some(path) => GridConfig::load(path)?,
        None => {
            let missing: Vec<&str> = [
                ("--instances", a.instances.is_empty()),
                ("--bounds-list", a.bounds_list.is_empty()),
                ("--c-list", a.c_list.is_empty()),
                ("--tau-list", a.tau_list.is_empty()),
            ]
            .into_iter()
            .filter_map(|(flag, absent)| absent.then_some(flag))
            .collect();
            if !missing.is_empty() {
                return Err(Failure::Usage(format!("grid needs --config or {}", missing.join(", "))));
            }
            GridConfig::new(Vec::new(), &[], Vec::new(), Vec::new())
        }
    };
    if !a.instances.is_empty() {
        cfg.instances = a.instances;
    }
    if !a.bounds_list.is_empty() {
        cfg.bounds_list = a.bounds_list.iter().map(ToString::to_string).collect();
    }
    if !a.c_list.is_empty() {
        cfg.c_list = a.c_list;
    }
    if !a.tau_list.is_empty() {
        cfg.tau_list = a.tau_list;
    }
    if !a.algorithms.is_empty() {
        cfg.algorithms = a.algorithms.iter().map(ToString::to_string).collect();
    }
    cfg.sequences_per_setting = a.sequences_per_setting.unwrap_or(cfg.sequences_per_setting);
    cfg.repetitions = a.repetitions.unwrap_or(cfg.repetitions);
    cfg.epochs = a.epochs.unwrap_or(cfg.epochs);
    cfg.epoch0_evals = a.epoch0_evals.unwrap_or(cfg.epoch0_evals);
    cfg.baseline_reps = a.baseline_reps.unwrap_or(cfg.baseline_reps);
    cfg.baseline_evals = a.baseline_evals.unwrap_or(cfg.baseline_evals);
    cfg.master_seed = a.seed.unwrap_or(cfg.master_seed);
    cfg.validate()?;

    let fp = fingerprint(&cfg)?;
    let sidecar = PathBuf::from(format!("{}.sha256", a.out.display()));
    if let (Ok(existing), Ok(stamp)) = (std::fs::read(&a.out), std::fs::read_to_string(&sidecar)) {
        if stamp == format!("{fp} {}\n", content_hash(&existing)) {
            log::info!("{} is up to date for this config, nothing to do", a.out.display());
            return Ok(());
        }
    }
    log::info!("grid master_seed={} config fingerprint {fp}", cfg.master_seed);
    let rows = run_grid(&cfg, &GridOptions { jobs: a.jobs, cache_dir: a.cache_dir })?;
    let mut buf = Vec::new();
    write_results_csv(&rows, &mut buf)?;
    write_atomic(&a.out, &buf)?;
    write_atomic(&sidecar, format!("{fp} {}\n", content_hash(&buf)).as_bytes())?;
    log::info!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

fn analyze(a: AnalyzeArgs) -> CmdResult {
    let rows = read_results_csv(&a.results)?;
    let cells = rank_algorithms(&rows)?;
    let mut buf = Vec::new();
    write_stats_csv(&cells, &mut buf)?;
    write_atomic(&a.common.out, &buf)?;
    log::info!("{} cells from {} rows", cells.len(), rows.len());
    Ok(())
}

fn tour_diff_cmd(a: TourDiffArgs) -> CmdResult {
    let inst = ttpio::parse_ttp(&a.instance)?;
    let seq = PackingSequence::read(&a.sequence)?;
    let records = read_run_csv(&a.run)?;
    if records.len() != seq.plans.len() || records.iter().enumerate().any(|(i, r)| r.epoch != i) {
        return Err(Failure::Data(Error::Validation(format!(
            "{} holds {} epochs but the sequence has {} plans",
            a.run.display(),
            records.len(),
            seq.plans.len()
        ))));
    }
    if let Some(r) = a.reference_epoch {
        if r >= records.len() {
            return Err(Failure::Data(Error::Validation(format!("reference epoch {r} not in run"))));
        }
    }
    let mut diffs = Vec::new();
    for e in 1..records.len() {
        let base = a.reference_epoch.unwrap_or(e - 1);
        if base == e {
            continue;
        }
        let d = tour_diff(&inst, &seq.plans[e - 1], &seq.plans[e], &records[base].best_tour, &records[e].best_tour)?;
        diffs.push((e, d));
    }
    let mut buf = Vec::new();
    write_tour_diff_csv(&diffs, &mut buf)?;
    write_atomic(&a.common.out, &buf)?;
    Ok(())
}

/// Prints the usage line of the subcommand named in argv, or the top-level one.
fn print_usage() {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = std::env::args().nth(1);
    let usage = match sub.as_deref().and_then(|s| cmd.find_subcommand_mut(s)) {
        Some(sub) => sub.render_usage(),
        None => cmd.render_usage(),
    };
    eprintln!("\n{usage}");
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            if e.kind() != clap::error::ErrorKind::MissingRequiredArgument {
                print_usage();
            }
            return ExitCode::from(1);
        }
    };
    let start = Instant::now();
    log::info!("dwtsp {}", env!("CARGO_PKG_VERSION"));
    let result = match cli.command {
        Command::GenInstance(a) => gen_instance(a),
        Command::GenDynamics(a) => gen_dynamics(a),
        Command::Run(a) => run(a),
        Command::Baseline(a) => baseline(a),
        Command::Grid(a) => grid(a),
        Command::Analyze(a) => analyze(a),
        Command::TourDiff(a) => tour_diff_cmd(a),
    };
    match result {
        Ok(()) => {
            log::info!("done in {:.2?}", start.elapsed());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            print_usage();
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
