//! Run settings from a `key = value` config file and command-line flags.
//!
//! Both sources are flattened into `(key, value)` pairs with the flag pairs
//! last, so a flag overrides the file. Keys are the long flag names without
//! dashes: `system`, `param`, `range`, `value`, `fix`, `ic`, `step`,
//! `steps`, `transient`, `subsample`, `eps-count`, `dims`, `no-lyapunov`,
//! `jobs`, `out`, `repeat`. `fix` may appear several times.

use std::path::{Path, PathBuf};

use crocker::sweep::{ParamRange, SweepConfig};
use crocker::systems::SystemSpec;

use crate::CliError;

const KEYS: &[&str] = &[
    "system",
    "param",
    "range",
    "value",
    "fix",
    "ic",
    "step",
    "steps",
    "transient",
    "subsample",
    "eps-count",
    "dims",
    "no-lyapunov",
    "jobs",
    "out",
    "repeat",
];

const BUILTINS: &[&str] = &["rossler", "lorenz"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub system: Option<String>,
    pub param: Option<String>,
    pub range: Option<ParamRange>,
    pub value: Option<f64>,
    /// Later entries for the same name win.
    pub fix: Vec<(String, f64)>,
    pub ic: Option<Vec<f64>>,
    pub step: Option<f64>,
    pub steps: Option<usize>,
    pub transient: Option<usize>,
    pub subsample: Option<usize>,
    pub eps_count: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub no_lyapunov: bool,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub repeat: Option<usize>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str, origin: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("{origin}:{}: expected `key = value`", n + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(config_err(format!(
                "{origin}:{}: unknown key `{key}` (known: {})",
                n + 1,
                KEYS.join(", ")
            )));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text, &path.display().to_string())
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| config_err(format!("--{key}: cannot parse `{v}`")))
}

fn float(key: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = num(key, v)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(config_err(format!("--{key}: `{v}` is not finite")))
    }
}

fn float_list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',').map(|s| float(key, s.trim())).collect()
}

/// `low:high:count`, inclusive endpoints.
pub fn parse_range(v: &str) -> Result<ParamRange, CliError> {
    let parts: Vec<&str> = v.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(config_err(format!("--range: expected LOW:HIGH:COUNT, got `{v}`")));
    };
    let range = ParamRange::new(float("range", lo)?, float("range", hi)?, num("range", n)?);
    range.validate().map_err(|e| config_err(format!("--range: {e}")))?;
    Ok(range)
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(config_err(format!("{key}: expected true or false, got `{v}`"))),
    }
}

impl Settings {
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (key, v) in pairs {
            let key = key.as_str();
            match key {
                "system" => s.system = Some(v.clone()),
                "param" => s.param = Some(v.clone()),
                "range" => s.range = Some(parse_range(v)?),
                "value" => s.value = Some(float(key, v)?),
                "fix" => {
                    let (name, val) = v
                        .split_once('=')
                        .ok_or_else(|| config_err(format!("--fix: expected NAME=VALUE, got `{v}`")))?;
                    s.fix.push((name.trim().to_string(), float(key, val.trim())?));
                }
                "ic" => s.ic = Some(float_list(key, v)?),
                "step" => s.step = Some(float(key, v)?),
                "steps" => s.steps = Some(num(key, v)?),
                "transient" => s.transient = Some(num(key, v)?),
                "subsample" => s.subsample = Some(num(key, v)?),
                "eps-count" => s.eps_count = Some(num(key, v)?),
                "dims" => {
                    s.dims = Some(
                        v.split(',')
                            .map(|d| num::<usize>(key, d.trim()))
                            .collect::<Result<_, _>>()?,
                    )
                }
                "no-lyapunov" => s.no_lyapunov = parse_bool(key, v)?,
                "jobs" => s.jobs = Some(num(key, v)?),
                "out" => s.out = Some(PathBuf::from(v)),
                "repeat" => s.repeat = Some(num(key, v)?),
                _ => return Err(config_err(format!("unknown setting `{key}`"))),
            }
        }
        Ok(s)
    }

    fn system_spec(&self) -> Result<SystemSpec, CliError> {
        let name = self
            .system
            .as_deref()
            .ok_or_else(|| config_err(format!("--system is required (available: {})", BUILTINS.join(", "))))?;
        let mut spec = SystemSpec::builtin(name)
            .map_err(|_| config_err(format!("unknown system `{name}` (available: {})", BUILTINS.join(", "))))?;
        if let Some(p) = &self.param {
            spec = spec.with_control_param(p).map_err(|e| config_err(e.to_string()))?;
        }
        for (name, v) in &self.fix {
            if name == spec.control_param() {
                return Err(config_err(format!("--fix {name}: `{name}` is the swept parameter")));
            }
            spec = spec.with_param(name, *v).map_err(|e| config_err(e.to_string()))?;
        }
        Ok(spec)
    }

    /// Resolves the sweep configuration; `range` stands in for a missing
    /// `--range` (used by single-value runs).
    pub fn sweep_config(&self, range: Option<ParamRange>) -> Result<SweepConfig, CliError> {
        let spec = self.system_spec()?;
        let range = self
            .range
            .or(range)
            .ok_or_else(|| config_err("--range LOW:HIGH:COUNT is required"))?;
        let mut cfg = SweepConfig::for_system(spec, range).map_err(|e| config_err(e.to_string()))?;
        let int = &mut cfg.integration;
        if let Some(ic) = &self.ic {
            int.initial_state = ic.clone();
        }
        if let Some(h) = self.step {
            int.step_size = h;
        }
        if let Some(n) = self.steps {
            int.total_steps = n;
        }
        if let Some(n) = self.transient {
            int.transient_steps = n;
        }
        if let Some(k) = self.subsample {
            cfg.subsample_count = k;
        }
        if let Some(m) = self.eps_count {
            cfg.epsilon_count = m;
        }
        if let Some(d) = &self.dims {
            cfg.dimensions = d.clone();
        }
        cfg.compute_lyapunov = !self.no_lyapunov;
        if let Some(j) = self.jobs {
            if j == 0 {
                return Err(config_err("--jobs must be at least 1"));
            }
            cfg.jobs = Some(j);
        }
        cfg.validate().map_err(|e| config_err(e.to_string()))?;
        Ok(cfg)
    }
}
