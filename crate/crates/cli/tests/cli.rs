use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use crocker::export::read_crocker_csv;
use crocker_cli::manifest::verify_manifest;

const QUICK: &[&str] = &["--steps", "6000", "--transient", "2000", "--subsample", "60"];

fn crocker(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crocker"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn quick_sweep(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "sweep",
        "--system",
        "rossler",
        "--param",
        "a",
        "--range",
        "0.37:0.43:4",
        "--out",
    ];
    let out = out.to_str().unwrap();
    args.push(out);
    args.extend(QUICK);
    args.extend(extra);
    crocker(&args)
}

const SWEEP_FILES: &[&str] = &[
    "crocker_dim0.csv",
    "crocker_dim1.csv",
    "l1_curves.csv",
    "lyapunov.csv",
    "bifurcation.csv",
    "timings.csv",
    "summary.txt",
    "crocker_dim0.pgm",
    "crocker_dim0.pgm.txt",
    "crocker_dim0.svg",
    "crocker_dim1.pgm",
    "crocker_dim1.pgm.txt",
    "crocker_dim1.svg",
    "manifest.json",
];

#[test]
fn sweep_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let o = quick_sweep(dir.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in SWEEP_FILES {
        assert!(dir.path().join(f).is_file(), "missing {f}");
    }
    assert!(stdout(&o).contains("pearson_lambda_l1_dim1"));
    assert!(verify_manifest(dir.path()).unwrap().is_empty());

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["range"]["count"], 4);
    assert_eq!(manifest["config"]["integration"]["total_steps"], 6000);
    assert_eq!(manifest["files"].as_array().unwrap().len(), SWEEP_FILES.len() - 1);
    assert!(manifest["stage_wall_clock_ms"]["persistence_dim1"].as_f64().unwrap() > 0.0);

    // Every CSV in the inventory is rectangular with a header row.
    for f in manifest["files"].as_array().unwrap() {
        let name = f["path"].as_str().unwrap();
        if !name.ends_with(".csv") {
            continue;
        }
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        let widths: Vec<usize> = text.lines().map(|l| l.split(',').count()).collect();
        assert!(
            widths.len() > 1 && widths.iter().all(|&w| w == widths[0]),
            "{name} is ragged"
        );
    }
    for d in [0, 1] {
        let text = fs::read_to_string(dir.path().join(format!("crocker_dim{d}.csv"))).unwrap();
        let cm = read_crocker_csv(&text, d).unwrap();
        assert_eq!((cm.partition.len(), cm.n_params()), (100, 4));
    }
    let pgm = fs::read(dir.path().join("crocker_dim1.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n4 100\n255\n"));
    assert_eq!(pgm.len(), b"P5\n4 100\n255\n".len() + 400);
}

#[test]
fn repeat_sweeps_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(quick_sweep(a.path(), &["--jobs", "3"]).status.success());
    assert!(quick_sweep(b.path(), &["--jobs", "1"]).status.success());
    for f in SWEEP_FILES {
        if matches!(*f, "timings.csv" | "manifest.json") {
            continue;
        }
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn missing_out_is_a_config_error_with_usage() {
    let o = crocker(&["sweep", "--system", "rossler", "--range", "0.37:0.43:5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("--out") && err.contains("Usage: crocker sweep"), "{err}");
}

#[test]
fn unknown_system_lists_builtins() {
    let o = crocker(&["single", "--system", "duffing"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("rossler") && err.contains("lorenz"), "{err}");
}

#[test]
fn bad_flags_are_config_errors() {
    for args in [
        &["sweep", "--system", "rossler", "--range", "0.43:0.37:5", "--out", "x"][..],
        &[
            "sweep",
            "--system",
            "rossler",
            "--range",
            "0.37:0.43:5",
            "--out",
            "x",
            "--dims",
            "2",
        ],
        &[
            "sweep",
            "--system",
            "rossler",
            "--range",
            "0.37:0.43:5",
            "--out",
            "x",
            "--fix",
            "q=1",
        ],
        &[
            "sweep",
            "--system",
            "rossler",
            "--range",
            "0.37:0.43:5",
            "--out",
            "x",
            "--subsample",
            "0",
        ],
        &["single", "--system", "lorenz", "--repeat", "0"],
        &["single", "--system", "lorenz", "--frobnicate"],
        &["selftest", "--filter", "no-such-check"],
    ] {
        let o = crocker(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn runtime_failures_exit_3() {
    // Every value starts outside the divergence bound.
    let dir = tempfile::tempdir().unwrap();
    let o = quick_sweep(dir.path(), &["--ic", "1e7,0,0"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let file = dir.path().join("plain-file");
    fs::write(&file, "").unwrap();
    let o = quick_sweep(&file.join("sub"), &["--no-lyapunov"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "# quick Rössler sweep\nsystem = rossler\nparam = a\nrange = 0.37:0.43:3\nsteps = 6000\n\
             transient = 2000\nsubsample = 50\nno-lyapunov = true\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = crocker(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--subsample",
        "40",
        "--eps-count",
        "30",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["subsample_count"], 40);
    assert_eq!(manifest["config"]["epsilon_count"], 30);
    assert_eq!(manifest["config"]["compute_lyapunov"], false);
    let lyap = fs::read_to_string(out.join("lyapunov.csv")).unwrap();
    assert_eq!(lyap, "param,lambda,converged_flag\n");

    fs::write(&cfg, "system = rossler\nspeed = 3\n").unwrap();
    let o = crocker(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key `speed`"));
}

#[test]
fn fixed_parameters_reach_the_system() {
    let dir = tempfile::tempdir().unwrap();
    let o = quick_sweep(dir.path(), &["--fix", "b=1.5", "--fix", "c=4.5", "--no-lyapunov"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["params"]["b"], 1.5);
    assert_eq!(manifest["config"]["params"]["c"], 4.5);
}

#[test]
fn single_lorenz_classic_is_chaotic() {
    let dir = tempfile::tempdir().unwrap();
    let o = crocker(&[
        "single",
        "--system",
        "lorenz",
        "--value",
        "28",
        "--repeat",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lambda: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("lambda: "))
        .and_then(|v| v.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .expect("lambda line");
    assert!(lambda > 0.5, "{text}");
    assert!(text.contains("betti path dim 1") && text.contains("lyapunov path"));
    assert!(verify_manifest(dir.path()).unwrap().is_empty());
    let cloud = fs::read_to_string(dir.path().join("pointcloud.csv")).unwrap();
    assert_eq!(cloud.lines().count(), 201);
    assert!(cloud.starts_with("source_index,x0,x1,x2\n"));
    let bars = fs::read_to_string(dir.path().join("barcodes.csv")).unwrap();
    assert!(bars.contains(",inf\n"));
}

#[test]
fn selftest_passes_and_detects_faults() {
    let o = crocker(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));

    let o = crocker(&["selftest", "--filter", "persistence"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("PASS"))
        .map(String::from)
        .collect();
    assert!(
        !rows.is_empty() && rows.iter().all(|l| l.contains("persistence::")),
        "{rows:?}"
    );

    let o = crocker(&["selftest", "--inject-fault", "drop-h1-interval"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL persistence::"));

    let o = crocker(&["selftest", "--inject-fault", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let o = crocker(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sweep") && stdout(&o).contains("selftest"));
    let o = crocker(&["--version"]);
    assert!(o.status.success());
}
