use std::path::Path;
use std::process::{Command, Output};

fn dwtsp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwtsp"))
        .args(args)
        .current_dir(dir)
        .env_remove("DWTSP_CACHE_DIR")
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = dwtsp(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn setup(dir: &Path) {
    ok(dir, &["gen-instance", "--n", "15", "--items-per-city", "2", "--seed", "3", "--out", "i.ttp"]);
    ok(dir, &[
        "gen-dynamics", "--m", "28", "--L", "30", "--U", "70", "--c", "10", "--tau", "300", "--epochs", "4",
        "--seed", "42", "--out", "s.seq",
    ]);
}

#[test]
fn gen_dynamics_writes_epochs_plus_one_plans() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &[
        "gen-dynamics", "--m", "500", "--L", "30", "--U", "70", "--c", "5", "--tau", "10000", "--epochs", "30",
        "--seed", "42", "--out", "s.seq", "--diagnostics", "d.csv",
    ]);
    let text = std::fs::read_to_string(dir.path().join("s.seq")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "DWTSP-SEQ 1");
    assert_eq!(lines.len(), 2 + 31);
    let diag = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(diag.lines().count(), 32);
}

#[test]
fn run_emits_one_record_per_epoch_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    setup(d);
    let run = |out: &str| {
        ok(d, &[
            "run", "--instance", "i.ttp", "--sequence", "s.seq", "--mu", "20", "--operator", "jump",
            "--epoch0-evals", "2000", "--seed", "5", "--out", out,
        ])
    };
    run("a.csv");
    run("b.csv");
    let a = std::fs::read_to_string(d.join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read_to_string(d.join("b.csv")).unwrap());
    assert_eq!(a.lines().count(), 1 + 5);
    assert!(a.starts_with("epoch,best_cost,evals_used,tour\n0,"));

    ok(d, &["tour-diff", "--instance", "i.ttp", "--sequence", "s.seq", "--run", "a.csv", "--out", "diff.csv"]);
    let diff = std::fs::read_to_string(d.join("diff.csv")).unwrap();
    // 4 epochs x (15 cities + summary) + header
    assert_eq!(diff.lines().count(), 1 + 4 * 16);
    ok(d, &[
        "tour-diff", "--instance", "i.ttp", "--sequence", "s.seq", "--run", "a.csv", "--reference-epoch", "0",
        "--out", "diff0.csv",
    ]);
}

#[test]
fn usage_errors_exit_one_and_data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    setup(d);
    let zero_mu = dwtsp(d, &[
        "run", "--instance", "i.ttp", "--sequence", "s.seq", "--mu", "0", "--operator", "jump", "--out", "x.csv",
    ]);
    assert_eq!(zero_mu.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&zero_mu.stderr).contains("Usage"));
    assert_eq!(dwtsp(d, &["run", "--bogus"]).status.code(), Some(1));
    assert_eq!(dwtsp(d, &["grid", "--out", "g.csv"]).status.code(), Some(1));

    std::fs::write(d.join("bad.seq"), "DWTSP-SEQ 1\nm=3 L=30 U=70 c=50 tau=1 epochs=0 seed=1\n01\n").unwrap();
    let bad = dwtsp(d, &[
        "run", "--instance", "i.ttp", "--sequence", "bad.seq", "--mu", "1", "--operator", "jump", "--out", "x.csv",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("bad.seq:3"), "{}", String::from_utf8_lossy(&bad.stderr));
    assert!(!d.join("x.csv").exists());
}

#[test]
fn help_exits_zero_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["gen-instance", "gen-dynamics", "run", "baseline", "grid", "analyze", "tour-diff"] {
        let out = dwtsp(dir.path(), &[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("--out") && text.contains("--seed"), "{sub}: {text}");
    }
}

#[test]
fn grid_from_config_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    setup(d);
    std::fs::write(
        d.join("grid.toml"),
        r#"instances = ["i.ttp"]
bounds_list = ["30:70"]
c_list = [10]
tau_list = [100, 400]
algorithms = ["1:inversion", "20:jump"]
sequences_per_setting = 3
epochs = 3
epoch0_evals = 1000
baseline_reps = 2
baseline_evals = 2000
"#,
    )
    .unwrap();
    ok(d, &["grid", "--config", "grid.toml", "--jobs", "2", "--out", "g.csv"]);
    let first = std::fs::read(d.join("g.csv")).unwrap();
    assert!(d.join("g.csv.sha256").exists());
    // A second invocation leaves the up-to-date output alone.
    let stamp = std::fs::metadata(d.join("g.csv")).unwrap().modified().unwrap();
    ok(d, &["grid", "--config", "grid.toml", "--out", "g.csv"]);
    assert_eq!(std::fs::metadata(d.join("g.csv")).unwrap().modified().unwrap(), stamp);
    // Flags override config keys.
    ok(d, &["grid", "--config", "grid.toml", "--seed", "9", "--out", "g9.csv"]);
    assert_ne!(std::fs::read(d.join("g9.csv")).unwrap(), first);

    ok(d, &["analyze", "--results", "g.csv", "--out", "stats.csv"]);
    let stats = std::fs::read_to_string(d.join("stats.csv")).unwrap();
    assert_eq!(stats.lines().next().unwrap(), "instance,tau,L,U,c,algorithm,mean,std,worse_than");
    assert_eq!(stats.lines().count(), 1 + 2 * 2);
    assert!(stats.contains(",2:(20+1)-EA[jump],"));

    std::fs::write(d.join("typo.toml"), "instances = []\nbounds_list = []\nc_list = []\ntau_list = []\ncolour = 1\n").unwrap();
    assert_eq!(dwtsp(d, &["grid", "--config", "typo.toml", "--out", "t.csv"]).status.code(), Some(2));
}

#[test]
fn baseline_per_epoch() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    setup(d);
    ok(d, &[
        "baseline", "--instance", "i.ttp", "--sequence", "s.seq", "--reps", "2", "--evals", "1000", "--out", "b.csv",
    ]);
    let text = std::fs::read_to_string(d.join("b.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 5);
    assert_eq!(text.lines().next().unwrap(), "epoch,baseline_cost");
}

#[test]
fn grid_output_independent_of_job_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    setup(d);
    let grid = |jobs: &str, out: &str| {
        ok(d, &[
            "grid", "--instances", "i.ttp", "--bounds-list", "30:70,70:90", "--c-list", "10", "--tau-list", "100,300",
            "--sequences-per-setting", "2", "--epochs", "3", "--epoch0-evals", "500", "--baseline-reps", "1",
            "--baseline-evals", "500", "--seed", "4", "--jobs", jobs, "--out", out,
        ])
    };
    grid("1", "one.csv");
    grid("8", "eight.csv");
    assert_eq!(std::fs::read(d.join("one.csv")).unwrap(), std::fs::read(d.join("eight.csv")).unwrap());
}
