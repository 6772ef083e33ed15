//! `manifest.json`: resolved configuration, tool version, stage wall-clock
//! and a SHA-256 inventory of the files written alongside it.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crocker::sweep::SweepConfig;

pub const MANIFEST_NAME: &str = "manifest.json";

pub fn config_echo(cfg: &SweepConfig) -> Value {
    let params: Map<String, Value> = cfg.system.params().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let int = &cfg.integration;
    json!({
        "system": cfg.system.name(),
        "control_param": cfg.system.control_param(),
        "params": params,
        "range": {
            "low": cfg.param_range.low,
            "high": cfg.param_range.high,
            "count": cfg.param_range.count,
        },
        "integration": {
            "initial_state": int.initial_state,
            "step_size": int.step_size,
            "total_steps": int.total_steps,
            "transient_steps": int.transient_steps,
            "divergence_bound": int.divergence_bound,
        },
        "subsample_count": cfg.subsample_count,
        "epsilon_count": cfg.epsilon_count,
        "dimensions": cfg.dimensions,
        "compute_lyapunov": cfg.compute_lyapunov,
        "lyapunov": {
            "renorm_interval": cfg.lyapunov.renorm_interval,
            "total_time": cfg.lyapunov.total_time,
            "initial_separation": cfg.lyapunov.initial_separation,
        },
        "bifurcation_coordinate": cfg.bifurcation_coordinate,
        "jobs": cfg.jobs,
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes the manifest into `dir`, digesting each of `files` as it is on
/// disk now. `stages` are `(name, duration)` pairs in display order.
pub fn write_manifest(
    dir: &Path,
    command: &str,
    config: Value,
    stages: &[(String, Duration)],
    files: &[PathBuf],
) -> io::Result<PathBuf> {
    let mut inventory = Vec::with_capacity(files.len());
    for path in files {
        let bytes = fs::read(path)?;
        let name = path
            .strip_prefix(dir)
            .unwrap_or(path)
            .to_string_lossy()
            .replace('\\', "/");
        inventory.push(json!({
            "path": name,
            "bytes": bytes.len(),
            "sha256": sha256_hex(&bytes),
        }));
    }
    let stage_ms: Map<String, Value> = stages
        .iter()
        .map(|(k, d)| (k.clone(), json!(d.as_secs_f64() * 1e3)))
        .collect();
    let doc = json!({
        "tool": "crocker",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "stage_wall_clock_ms": stage_ms,
        "files": inventory,
    });
    let path = dir.join(MANIFEST_NAME);
    let mut text = serde_json::to_string_pretty(&doc).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

/// Re-reads a manifest and lists the files that are missing or whose
/// digest no longer matches.
pub fn verify_manifest(dir: &Path) -> io::Result<Vec<String>> {
    let text = fs::read_to_string(dir.join(MANIFEST_NAME))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    let files = doc["files"]
        .as_array()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "manifest has no file list"))?;
    let mut bad = Vec::new();
    for f in files {
        let name = f["path"].as_str().unwrap_or_default();
        match fs::read(dir.join(name)) {
            Ok(bytes) if f["sha256"].as_str() == Some(sha256_hex(&bytes).as_str()) => {}
            _ => bad.push(name.to_string()),
        }
    }
    Ok(bad)
}
