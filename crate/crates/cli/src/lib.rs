//! The `crocker` command line: `sweep`, `single` and `selftest`.
//!
//! Exit codes: 0 on success, 2 for configuration errors (bad flags, bad
//! config file, invalid settings), 3 for runtime errors (I/O, every
//! parameter value diverged, failing self-test checks).

pub mod manifest;
pub mod settings;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, CommandFactory, Parser, Subcommand};
use thiserror::Error;

use crocker::export::{self, write_barcodes_csv, write_pointcloud_csv};
use crocker::persistence::max_finite_death;
use crocker::sweep::{distinct_levels, run_sweep, single_run, ParamRange, SingleReport, StageTimings, SweepError};
use crocker::verify::selftest::{check_names, run_selftest, Fault, SelftestOptions};

use settings::{read_config_file, Settings};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

fn io_err(what: &str) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Runtime(format!("{what}: {e}"))
}

fn sweep_err(e: SweepError) -> CliError {
    match e {
        SweepError::InvalidConfig(m) => CliError::Config(m),
        other => CliError::Runtime(other.to_string()),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "crocker",
    version,
    about = "CROCKER matrices and Lyapunov exponents across ODE parameter sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the control parameter and write CROCKER matrices, curves and a summary.
    Sweep(SweepArgs),
    /// Run the pipeline at one parameter value and report stage timings.
    Single(SingleArgs),
    /// Run the built-in oracle and invariant checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct CommonArgs {
    /// Built-in system: rossler or lorenz.
    #[arg(long)]
    pub system: Option<String>,
    /// Control parameter to vary (default: the system's usual one).
    #[arg(long)]
    pub param: Option<String>,
    /// Set a non-swept parameter, e.g. `--fix b=2`. Repeatable.
    #[arg(long, value_name = "NAME=VALUE")]
    pub fix: Vec<String>,
    /// Initial state, comma separated.
    #[arg(long, value_name = "X,Y,Z")]
    pub ic: Option<String>,
    /// RK4 step size.
    #[arg(long)]
    pub step: Option<f64>,
    /// Total RK4 steps, transient included.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Steps discarded before sampling.
    #[arg(long)]
    pub transient: Option<usize>,
    /// Points kept by greedy subsampling.
    #[arg(long)]
    pub subsample: Option<usize>,
    /// Number of ε values in the Betti-vector grid.
    #[arg(long = "eps-count")]
    pub eps_count: Option<usize>,
    /// Homology dimensions, comma separated.
    #[arg(long, value_name = "0,1")]
    pub dims: Option<String>,
    /// Skip the Lyapunov exponent.
    #[arg(long = "no-lyapunov")]
    pub no_lyapunov: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `key = value` settings file; flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Parameter grid, inclusive endpoints.
    #[arg(long, value_name = "LOW:HIGH:COUNT")]
    pub range: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SingleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Control-parameter value (default: the system's built-in value).
    #[arg(long)]
    pub value: Option<f64>,
    /// Repetitions for the timing statistics.
    #[arg(long)]
    pub repeat: Option<usize>,
}

#[derive(Debug, Clone, Args, Default)]
pub struct SelftestArgs {
    /// Run only checks whose `module::name` contains this text.
    #[arg(long)]
    pub filter: Option<String>,
    /// List the checks and exit.
    #[arg(long)]
    pub list: bool,
    /// Corrupt one stage on purpose to confirm the checks notice.
    #[arg(long = "inject-fault", value_name = "FAULT", hide = true)]
    pub inject_fault: Option<String>,
}

fn flag_pairs(c: &CommonArgs) -> Vec<(String, String)> {
    let mut p: Vec<(String, String)> = Vec::new();
    let mut push = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            p.push((k.to_string(), v));
        }
    };
    push("system", c.system.clone());
    push("param", c.param.clone());
    push("ic", c.ic.clone());
    push("step", c.step.map(|v| v.to_string()));
    push("steps", c.steps.map(|v| v.to_string()));
    push("transient", c.transient.map(|v| v.to_string()));
    push("subsample", c.subsample.map(|v| v.to_string()));
    push("eps-count", c.eps_count.map(|v| v.to_string()));
    push("dims", c.dims.clone());
    push("no-lyapunov", c.no_lyapunov.then(|| "true".to_string()));
    push("jobs", c.jobs.map(|v| v.to_string()));
    push("out", c.out.as_ref().map(|v| v.to_string_lossy().into_owned()));
    for f in &c.fix {
        p.push(("fix".into(), f.clone()));
    }
    p
}

fn resolve(common: &CommonArgs, extra: Vec<(String, String)>) -> Result<Settings, CliError> {
    let mut pairs = match &common.config {
        Some(path) => read_config_file(path)?,
        None => Vec::new(),
    };
    pairs.extend(flag_pairs(common));
    pairs.extend(extra);
    Settings::from_pairs(&pairs)
}

fn total(timings: &[Option<StageTimings>], f: impl Fn(&StageTimings) -> Duration) -> Duration {
    timings.iter().flatten().map(f).sum()
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let extra = args.range.iter().map(|r| ("range".to_string(), r.clone())).collect();
    let settings = resolve(&args.common, extra)?;
    let dir = settings
        .out
        .clone()
        .ok_or_else(|| CliError::Config("--out DIR is required".into()))?;
    let cfg = settings.sweep_config(None)?;

    let start = Instant::now();
    let result = run_sweep(&cfg).map_err(sweep_err)?;
    let sweep_time = start.elapsed();

    let start = Instant::now();
    let files = export::write_sweep_dir(&result, &dir).map_err(io_err("writing outputs"))?;
    let export_time = start.elapsed();

    let t = &result.timings;
    let mut stages = vec![
        ("integrate".to_string(), total(t, |s| s.integrate)),
        ("subsample".to_string(), total(t, |s| s.subsample)),
        ("distances".to_string(), total(t, |s| s.distances)),
    ];
    for (k, d) in result.dimensions.iter().enumerate() {
        stages.push((format!("persistence_dim{d}"), total(t, |s| s.persistence[k])));
        stages.push((
            format!("betti_dim{d}"),
            total(t, |s| s.betti.get(k).copied().unwrap_or_default()),
        ));
    }
    stages.push(("bifurcation".into(), total(t, |s| s.bifurcation)));
    if cfg.compute_lyapunov {
        stages.push(("lyapunov".into(), total(t, |s| s.lyapunov.unwrap_or_default())));
    }
    stages.push(("sweep_wall_clock".into(), sweep_time));
    stages.push(("export_wall_clock".into(), export_time));
    manifest::write_manifest(&dir, "sweep", manifest::config_echo(&cfg), &stages, &files)
        .map_err(io_err("writing manifest"))?;

    let w = |e: io::Error| CliError::Runtime(format!("writing to stdout: {e}"));
    write!(out, "{}", export::summary_text(&result)).map_err(w)?;
    writeln!(
        out,
        "wrote {} files and {} to {} in {:.1} s",
        files.len(),
        manifest::MANIFEST_NAME,
        dir.display(),
        (sweep_time + export_time).as_secs_f64()
    )
    .map_err(w)?;
    Ok(())
}

/// Sample mean and standard deviation in milliseconds.
pub fn mean_sd_ms(samples: &[Duration]) -> (f64, f64) {
    let n = samples.len() as f64;
    let ms: Vec<f64> = samples.iter().map(|d| d.as_secs_f64() * 1e3).collect();
    let mean = ms.iter().sum::<f64>() / n;
    let sd = if samples.len() > 1 {
        (ms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

/// Per-stage rows `(label, samples)` for a series of single runs.
fn stage_rows(runs: &[SingleReport]) -> Vec<(String, Vec<Duration>)> {
    let col = |f: &dyn Fn(&StageTimings) -> Duration| runs.iter().map(|r| f(&r.analysis.timings)).collect::<Vec<_>>();
    let dims = &runs[0].dimensions;
    let mut rows = vec![
        ("integrate".to_string(), col(&|t| t.integrate)),
        ("subsample".to_string(), col(&|t| t.subsample)),
        ("distances".to_string(), col(&|t| t.distances)),
    ];
    for (k, d) in dims.iter().enumerate() {
        rows.push((format!("persistence dim {d}"), col(&|t| t.persistence[k])));
        rows.push((format!("betti vector dim {d}"), col(&|t| t.betti[k])));
    }
    rows.push(("bifurcation".to_string(), col(&|t| t.bifurcation)));
    for (k, d) in dims.iter().enumerate() {
        rows.push((format!("betti path dim {d}"), col(&|t| t.betti_path(k))));
    }
    if runs[0].analysis.timings.lyapunov.is_some() {
        rows.push(("lyapunov path".to_string(), col(&|t| t.lyapunov.unwrap_or_default())));
    }
    rows
}

pub fn cmd_single(args: &SingleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut extra = Vec::new();
    if let Some(v) = args.value {
        extra.push(("value".to_string(), v.to_string()));
    }
    if let Some(r) = args.repeat {
        extra.push(("repeat".to_string(), r.to_string()));
    }
    let settings = resolve(&args.common, extra)?;
    let probe = settings.sweep_config(Some(ParamRange::new(0.0, 0.0, 1)))?;
    let value = settings.value.unwrap_or_else(|| probe.system.control_value());
    let cfg = settings.sweep_config(Some(ParamRange::new(value, value, 1)))?;
    let repeat = settings.repeat.unwrap_or(1);
    if repeat == 0 {
        return Err(CliError::Config("--repeat must be at least 1".into()));
    }

    let pool = sequential_runs(&cfg, value, repeat)?;
    let first = &pool[0];
    let a = &first.analysis;
    let w = |e: io::Error| CliError::Runtime(format!("writing to stdout: {e}"));

    writeln!(
        out,
        "{} {} = {}, {} points, {} run{}",
        cfg.system.name(),
        cfg.system.control_param(),
        value,
        a.cloud.len(),
        repeat,
        if repeat == 1 { "" } else { "s" }
    )
    .map_err(w)?;
    for ((bc, d), l1) in a.barcodes.iter().zip(&first.dimensions).zip(&first.l1) {
        writeln!(
            out,
            "dim {d}: {} intervals ({} infinite), max finite death {:.6}, L1 {}",
            bc.len(),
            bc.infinite_count(),
            max_finite_death(bc),
            l1.map_or("n/a".to_string(), |v| v.to_string())
        )
        .map_err(w)?;
    }
    match &a.lyapunov {
        Some(Some(est)) => writeln!(
            out,
            "lambda: {:.6}{}",
            est.lambda,
            if est.converged() { "" } else { " (not converged)" }
        ),
        Some(None) => writeln!(out, "lambda: diverged"),
        None => writeln!(out, "lambda: skipped"),
    }
    .map_err(w)?;
    writeln!(
        out,
        "local maxima of x{}: {} ({} levels at tolerance 0.05)",
        cfg.bifurcation_coordinate,
        a.bifurcation.len(),
        distinct_levels(&a.bifurcation, 0.05)
    )
    .map_err(w)?;

    writeln!(
        out,
        "stage timings over {repeat} run{}:",
        if repeat == 1 { "" } else { "s" }
    )
    .map_err(w)?;
    let rows = stage_rows(&pool);
    let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    for (label, samples) in &rows {
        let (m, sd) = mean_sd_ms(samples);
        writeln!(out, "  {label:<width$}  {m:.3} ± {sd:.3} ms").map_err(w)?;
    }

    if let Some(dir) = &settings.out {
        fs::create_dir_all(dir).map_err(io_err("creating output directory"))?;
        let mut files = Vec::new();
        let mut put = |name: &str, bytes: Vec<u8>| -> Result<(), CliError> {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(io_err("writing outputs"))?;
            files.push(path);
            Ok(())
        };
        let mut buf = Vec::new();
        write_pointcloud_csv(&mut buf, &a.cloud).map_err(io_err("rendering point cloud"))?;
        put("pointcloud.csv", buf)?;
        let mut buf = Vec::new();
        write_barcodes_csv(&mut buf, &a.barcodes).map_err(io_err("rendering barcodes"))?;
        put("barcodes.csv", buf)?;
        let mut csv = String::from("stage,mean_ms,sd_ms\n");
        for (label, samples) in &rows {
            let (m, sd) = mean_sd_ms(samples);
            csv.push_str(&format!("{},{m:.6},{sd:.6}\n", label.replace(' ', "_")));
        }
        put("timings.csv", csv.into_bytes())?;
        let stages: Vec<(String, Duration)> = rows
            .iter()
            .map(|(l, s)| (l.replace(' ', "_"), Duration::from_secs_f64(mean_sd_ms(s).0 / 1e3)))
            .collect();
        manifest::write_manifest(dir, "single", manifest::config_echo(&cfg), &stages, &files)
            .map_err(io_err("writing manifest"))?;
        writeln!(
            out,
            "wrote {} files and {} to {}",
            files.len(),
            manifest::MANIFEST_NAME,
            dir.display()
        )
        .map_err(w)?;
    }
    Ok(())
}

/// Runs the single-value pipeline `repeat` times in sequence on the calling
/// thread, so every stage is timed under the same conditions.
fn sequential_runs(cfg: &crocker::SweepConfig, value: f64, repeat: usize) -> Result<Vec<SingleReport>, CliError> {
    (0..repeat).map(|_| single_run(cfg, value).map_err(sweep_err)).collect()
}

pub fn cmd_selftest(args: &SelftestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let w = |e: io::Error| CliError::Runtime(format!("writing to stdout: {e}"));
    if args.list {
        for name in check_names() {
            writeln!(out, "{name}").map_err(w)?;
        }
        return Ok(());
    }
    let fault = match &args.inject_fault {
        Some(name) => Some(Fault::parse(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown fault `{name}` (available: {})",
                Fault::ALL.map(Fault::name).join(", ")
            ))
        })?),
        None => None,
    };
    let report = run_selftest(&SelftestOptions {
        filter: args.filter.clone(),
        fault,
    });
    if report.results.is_empty() {
        return Err(CliError::Config(format!(
            "no check matches `{}`",
            args.filter.as_deref().unwrap_or_default()
        )));
    }
    writeln!(out, "{report}").map_err(w)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Runtime(format!("{} check(s) failed", report.failed())))
    }
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let (name, outcome) = match &cli.command {
        Command::Sweep(a) => ("sweep", cmd_sweep(a, out)),
        Command::Single(a) => ("single", cmd_single(a, out)),
        Command::Selftest(a) => ("selftest", cmd_selftest(a, out)),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let CliError::Config(_) = e {
                let mut cmd = Cli::command();
                cmd.build();
                if let Some(sub) = cmd.find_subcommand_mut(name) {
                    let _ = writeln!(err, "\n{}", sub.render_usage());
                    let _ = writeln!(err, "For more information, try 'crocker {name} --help'.");
                }
            }
            e.exit_code()
        }
    }
}
