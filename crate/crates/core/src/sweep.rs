//! Parameter sweeps: the per-parameter pipeline, the gather into CROCKER
//! matrices, and the summary statistics compared against λ.
//!
//! For each control-parameter value the pipeline integrates the system,
//! drops the transient, greedily subsamples the trajectory, builds the Rips
//! filtration and computes the requested barcodes (plus λ and the
//! bifurcation samples when asked). Once every value is done, one partition
//! per dimension is laid over `[0, d_max]`, with `d_max` the largest finite
//! death of that dimension over the whole sweep.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::crocker::{
    betti_vector, crocker_matrix_with_gaps, l1_norm, make_partition, CrockerError, CrockerMatrix, DEFAULT_EPSILON_COUNT,
};
use crate::lyapunov::{max_lyapunov, LyapunovConfig, LyapunovEstimate};
use crate::persistence::{
    barcode, build_filtration, max_finite_death, Barcode, PersistenceError, DEFAULT_MAX_VERTICES_H1,
};
use crate::pointcloud::{distance_matrix, greedy_subsample, PointCloud, PointCloudError};
use crate::systems::{integrate, IntegrationConfig, IntegrationError, SystemError, SystemSpec, Trajectory};

pub const DEFAULT_SUBSAMPLE: usize = 200;
pub const DEFAULT_PARAM_COUNT: usize = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    PointCloud(#[from] PointCloudError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Crocker(#[from] CrockerError),
    #[error("every parameter value failed (first failure: {0})")]
    AllFailed(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("only {0} complete pairs; need at least 2")]
    TooFewPairs(usize),
    #[error("zero variance in one of the sequences")]
    ZeroVariance,
}

/// Inclusive `low:high:count` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub low: f64,
    pub high: f64,
    pub count: usize,
}

impl ParamRange {
    pub fn new(low: f64, high: f64, count: usize) -> Self {
        Self { low, high, count }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |m: &str| Err(SweepError::InvalidConfig(m.to_string()));
        if !(self.low.is_finite() && self.high.is_finite()) {
            return bad("parameter range must be finite");
        }
        match self.count {
            0 => bad("parameter count must be positive"),
            1 if self.low <= self.high => Ok(()),
            1 => bad("parameter range needs low <= high"),
            _ if self.low < self.high => Ok(()),
            _ => bad("parameter range needs low < high"),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.low];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.high
                } else {
                    self.low + (self.high - self.low) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub system: SystemSpec,
    pub param_range: ParamRange,
    pub integration: IntegrationConfig,
    pub subsample_count: usize,
    pub epsilon_count: usize,
    /// Homology dimensions to compute, a non-empty subset of `{0, 1}`.
    pub dimensions: Vec<usize>,
    pub compute_lyapunov: bool,
    pub lyapunov: LyapunovConfig,
    /// Coordinate whose local maxima form the bifurcation diagram.
    pub bifurcation_coordinate: usize,
    /// Worker threads; `None` uses the machine's parallelism.
    pub jobs: Option<usize>,
}

impl SweepConfig {
    /// Defaults for a built-in system over `range`.
    pub fn for_system(system: SystemSpec, range: ParamRange) -> Result<Self, SweepError> {
        let integration = system
            .default_integration()
            .ok_or_else(|| SweepError::InvalidConfig(format!("no default integration for `{}`", system.name())))?;
        Ok(Self {
            system,
            param_range: range,
            integration,
            subsample_count: DEFAULT_SUBSAMPLE,
            epsilon_count: DEFAULT_EPSILON_COUNT,
            dimensions: vec![0, 1],
            compute_lyapunov: true,
            lyapunov: LyapunovConfig::default(),
            bifurcation_coordinate: 0,
            jobs: None,
        })
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        self.param_range.validate()?;
        self.integration.validate(self.system.dimension())?;
        let bad = |m: String| Err(SweepError::InvalidConfig(m));
        if self.dimensions.is_empty() {
            return bad("at least one homology dimension is required".into());
        }
        if let Some(d) = self.dimensions.iter().find(|&&d| d > 1) {
            return bad(format!("homology dimension {d} is not supported (0 or 1)"));
        }
        let kept = self.integration.total_steps - self.integration.transient_steps;
        if self.subsample_count == 0 || self.subsample_count > kept {
            return bad(format!(
                "subsample count {} must be in 1..={kept} (retained trajectory length)",
                self.subsample_count
            ));
        }
        if self.dimensions.contains(&1) && self.subsample_count > DEFAULT_MAX_VERTICES_H1 {
            return bad(format!(
                "subsample count {} exceeds the H1 vertex cap {DEFAULT_MAX_VERTICES_H1}",
                self.subsample_count
            ));
        }
        if self.epsilon_count < 2 {
            return bad("epsilon count must be at least 2".into());
        }
        if self.bifurcation_coordinate >= self.system.dimension() {
            return bad(format!(
                "bifurcation coordinate {} out of range",
                self.bifurcation_coordinate
            ));
        }
        if self.compute_lyapunov
            && !(self.lyapunov.renorm_interval > 0.0
                && self.lyapunov.total_time >= self.lyapunov.renorm_interval
                && self.lyapunov.initial_separation > 0.0)
        {
            return bad("lyapunov settings need total_time >= renorm_interval > 0 and δ0 > 0".into());
        }
        Ok(())
    }

    fn dims_sorted(&self) -> Vec<usize> {
        let mut d = self.dimensions.clone();
        d.sort_unstable();
        d.dedup();
        d
    }
}

/// Wall-clock cost of each stage for one parameter value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageTimings {
    pub integrate: Duration,
    pub subsample: Duration,
    /// Distance matrix plus filtration.
    pub distances: Duration,
    /// Per requested dimension, aligned with [`SweepResult::dimensions`].
    pub persistence: Vec<Duration>,
    /// Betti vector and L1 norm per dimension (filled during the gather).
    pub betti: Vec<Duration>,
    pub bifurcation: Duration,
    pub lyapunov: Option<Duration>,
}

impl StageTimings {
    /// Cost of the Betti-vector route for the `k`-th requested dimension,
    /// from integration to L1 norm.
    pub fn betti_path(&self, k: usize) -> Duration {
        self.integrate
            + self.subsample
            + self.distances
            + self.persistence.get(k).copied().unwrap_or_default()
            + self.betti.get(k).copied().unwrap_or_default()
    }
}

/// Everything computed for one parameter value.
#[derive(Debug, Clone)]
pub struct ParameterAnalysis {
    pub param: f64,
    pub cloud: PointCloud,
    /// Aligned with the sorted requested dimensions.
    pub barcodes: Vec<Barcode>,
    pub bifurcation: Vec<f64>,
    /// `None` when not requested; `Some(None)` when the λ run diverged.
    pub lyapunov: Option<Option<LyapunovEstimate>>,
    pub timings: StageTimings,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Runs the per-parameter pipeline at control value `param`.
pub fn analyze_parameter(cfg: &SweepConfig, param: f64) -> Result<ParameterAnalysis, SweepError> {
    let spec = cfg.system.with_control(param)?;
    let dims = cfg.dims_sorted();
    let mut timings = StageTimings::default();

    let (traj, t) = timed(|| integrate(&spec, &cfg.integration));
    timings.integrate = t;
    let traj = traj?;

    let (bifurcation, t) = timed(|| bifurcation_samples(&traj, cfg.bifurcation_coordinate));
    timings.bifurcation = t;

    let (cloud, t) = timed(|| greedy_subsample(&PointCloud::from_trajectory(&traj), cfg.subsample_count, 0));
    timings.subsample = t;
    let cloud = cloud?;

    let (filt, t) = timed(|| build_filtration(&distance_matrix(&cloud)));
    timings.distances = t;

    let mut barcodes = Vec::with_capacity(dims.len());
    for &d in &dims {
        let (bc, t) = timed(|| barcode(&filt, d));
        timings.persistence.push(t);
        barcodes.push(bc?);
    }

    let lyapunov = if cfg.compute_lyapunov {
        let (est, t) = timed(|| max_lyapunov(&spec, &cfg.integration, &cfg.lyapunov));
        timings.lyapunov = Some(t);
        Some(est.ok())
    } else {
        None
    };

    Ok(ParameterAnalysis {
        param,
        cloud,
        barcodes,
        bifurcation,
        lyapunov,
        timings,
    })
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub system: String,
    pub control_param: String,
    pub param_values: Vec<f64>,
    pub dimensions: Vec<usize>,
    /// One matrix per entry of `dimensions`.
    pub crocker: Vec<CrockerMatrix>,
    /// Column sums of the matrices; `None` marks a failed parameter.
    pub l1_curves: Vec<Vec<Option<u64>>>,
    pub lyapunov: Option<Vec<Option<LyapunovEstimate>>>,
    pub bifurcation: Vec<Option<Vec<f64>>>,
    pub barcodes: Vec<Option<Vec<Barcode>>>,
    pub timings: Vec<Option<StageTimings>>,
    /// Error message per parameter that produced a gap.
    pub failures: Vec<Option<String>>,
}

impl SweepResult {
    pub fn crocker_for(&self, dimension: usize) -> Option<&CrockerMatrix> {
        self.dimensions
            .iter()
            .position(|&d| d == dimension)
            .map(|k| &self.crocker[k])
    }

    pub fn l1_curve_for(&self, dimension: usize) -> Option<&[Option<u64>]> {
        self.dimensions
            .iter()
            .position(|&d| d == dimension)
            .map(|k| self.l1_curves[k].as_slice())
    }

    pub fn lambda_curve(&self) -> Option<Vec<Option<f64>>> {
        self.lyapunov
            .as_ref()
            .map(|c| c.iter().map(|e| e.as_ref().map(|e| e.lambda)).collect())
    }

    /// Pearson correlation of λ against the L1 curve of each dimension.
    pub fn correlations(&self) -> Vec<(usize, Result<f64, StatsError>)> {
        let Some(lambda) = self.lambda_curve() else {
            return Vec::new();
        };
        self.dimensions
            .iter()
            .zip(&self.l1_curves)
            .map(|(&d, l1)| {
                let l1: Vec<Option<f64>> = l1.iter().map(|v| v.map(|v| v as f64)).collect();
                (d, pearson(&lambda, &l1))
            })
            .collect()
    }

    pub fn gap_count(&self) -> usize {
        self.failures.iter().flatten().count()
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult, SweepError> {
    cfg.validate()?;
    run_sweep_on(cfg, &cfg.param_range.values())
}

/// Runs the sweep on explicit parameter values (in the given order).
pub fn run_sweep_on(cfg: &SweepConfig, params: &[f64]) -> Result<SweepResult, SweepError> {
    cfg.validate()?;
    if params.is_empty() || params.iter().any(|p| !p.is_finite()) {
        return Err(SweepError::InvalidConfig(
            "parameter values must be finite and non-empty".into(),
        ));
    }
    let dims = cfg.dims_sorted();

    let work = || -> Vec<Result<ParameterAnalysis, SweepError>> {
        params.par_iter().map(|&p| analyze_parameter(cfg, p)).collect()
    };
    let outcomes = match cfg.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| SweepError::InvalidConfig(format!("worker pool: {e}")))?
            .install(work),
        None => work(),
    };

    if let Some(first) = outcomes.iter().find_map(|o| o.as_ref().err()) {
        if outcomes.iter().all(Result::is_err) {
            return Err(SweepError::AllFailed(first.to_string()));
        }
    }

    let mut timings: Vec<Option<StageTimings>> = Vec::with_capacity(params.len());
    let mut barcodes = Vec::with_capacity(params.len());
    let mut bifurcation = Vec::with_capacity(params.len());
    let mut failures = Vec::with_capacity(params.len());
    let mut lyapunov = cfg.compute_lyapunov.then(Vec::new);
    for outcome in outcomes {
        match outcome {
            Ok(a) => {
                timings.push(Some(a.timings));
                barcodes.push(Some(a.barcodes));
                bifurcation.push(Some(a.bifurcation));
                failures.push(None);
                if let Some(l) = lyapunov.as_mut() {
                    l.push(a.lyapunov.flatten());
                }
            }
            Err(e) => {
                timings.push(None);
                barcodes.push(None);
                bifurcation.push(None);
                failures.push(Some(e.to_string()));
                if let Some(l) = lyapunov.as_mut() {
                    l.push(None);
                }
            }
        }
    }

    let d_maxes: Vec<f64> = (0..dims.len())
        .map(|k| {
            barcodes
                .iter()
                .flatten()
                .map(|b: &Vec<Barcode>| max_finite_death(&b[k]))
                .fold(0.0, f64::max)
        })
        .collect();
    // A dimension with no finite death anywhere has all-zero columns on any
    // grid; borrow the widest grid of the other dimensions.
    let fallback = d_maxes.iter().copied().fold(0.0, f64::max);

    let mut crocker = Vec::with_capacity(dims.len());
    let mut l1_curves = Vec::with_capacity(dims.len());
    for (k, &d) in dims.iter().enumerate() {
        let column_bars: Vec<Option<&Barcode>> = barcodes.iter().map(|b| b.as_ref().map(|b| &b[k])).collect();
        let d_max = if d_maxes[k] > 0.0 { d_maxes[k] } else { fallback };
        let part = make_partition(d_max, cfg.epsilon_count)?;
        for (bc, t) in column_bars.iter().zip(timings.iter_mut()) {
            if let (Some(bc), Some(t)) = (bc, t.as_mut()) {
                let (_, dt) = timed(|| l1_norm(&betti_vector(bc, &part)));
                t.betti.push(dt);
            }
        }
        let cm = crocker_matrix_with_gaps(&column_bars, &part, params)?;
        debug_assert_eq!(cm.dimension, d);
        l1_curves.push(cm.l1_curve());
        crocker.push(cm);
    }

    Ok(SweepResult {
        system: cfg.system.name().to_string(),
        control_param: cfg.system.control_param().to_string(),
        param_values: params.to_vec(),
        dimensions: dims,
        crocker,
        l1_curves,
        lyapunov,
        bifurcation,
        barcodes,
        timings,
        failures,
    })
}

/// Values of coordinate `coordinate` at strict local maxima of the trajectory.
pub fn bifurcation_samples(traj: &Trajectory, coordinate: usize) -> Vec<f64> {
    let v: Vec<f64> = traj.coordinate(coordinate).collect();
    local_maxima(&v)
}

pub fn local_maxima(v: &[f64]) -> Vec<f64> {
    v.windows(3)
        .filter(|w| w[0] < w[1] && w[1] > w[2])
        .map(|w| w[1])
        .collect()
}

/// Number of clusters among `values` when consecutive sorted values closer
/// than `tol` are merged.
pub fn distinct_levels(values: &[f64], tol: f64) -> usize {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    match v.first() {
        None => 0,
        Some(_) => 1 + v.windows(2).filter(|w| w[1] - w[0] > tol).count(),
    }
}

/// Sample Pearson correlation over the pairs where both entries are present.
pub fn pearson(xs: &[Option<f64>], ys: &[Option<f64>]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    let pairs: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if pairs.len() < 2 {
        return Err(StatsError::TooFewPairs(pairs.len()));
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in &pairs {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// [`pearson`] for sequences without gaps.
pub fn pearson_complete(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    let wrap = |v: &[f64]| v.iter().copied().map(Some).collect::<Vec<_>>();
    pearson(&wrap(xs), &wrap(ys))
}

/// L1 distance between each column and the previous present column; the
/// first column and gap columns score 0.
pub fn changepoint_score(cm: &CrockerMatrix) -> Vec<f64> {
    let mut prev: Option<&Vec<u32>> = None;
    cm.columns
        .iter()
        .map(|col| match (col, prev) {
            (Some(c), Some(p)) => {
                prev = Some(c);
                c.iter().zip(p).map(|(&a, &b)| (a as f64 - b as f64).abs()).sum()
            }
            (Some(c), None) => {
                prev = Some(c);
                0.0
            }
            (None, _) => 0.0,
        })
        .collect()
}

/// Index of the largest score (first one on ties).
pub fn argmax(scores: &[f64]) -> Option<usize> {
    scores
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &s)| match best {
            Some((_, b)) if b >= s => best,
            _ => Some((i, s)),
        })
        .map(|(i, _)| i)
}

/// Output of [`single_run`]: one parameter value, per-dimension partitions.
#[derive(Debug, Clone)]
pub struct SingleReport {
    pub analysis: ParameterAnalysis,
    pub dimensions: Vec<usize>,
    /// L1 norm per dimension over that dimension's own `[0, d_max]` grid;
    /// `None` when the barcode has no finite death.
    pub l1: Vec<Option<u64>>,
}

/// Runs the pipeline for a single value, with Betti vectors on the value's
/// own partition (no sweep-wide `d_max`).
pub fn single_run(cfg: &SweepConfig, param: f64) -> Result<SingleReport, SweepError> {
    let mut probe = cfg.clone();
    probe.param_range = ParamRange::new(param, param, 1);
    probe.validate()?;
    let mut analysis = analyze_parameter(&probe, param)?;
    let mut l1 = Vec::new();
    for bc in &analysis.barcodes {
        let (v, t) = timed(|| {
            make_partition(max_finite_death(bc), cfg.epsilon_count)
                .ok()
                .map(|p| l1_norm(&betti_vector(bc, &p)))
        });
        analysis.timings.betti.push(t);
        l1.push(v);
    }
    Ok(SingleReport {
        dimensions: probe.dims_sorted(),
        analysis,
        l1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crocker::Partition;

    #[test]
    fn pearson_examples() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let lin: Vec<f64> = xs.iter().map(|x| 2.0 * x + 3.0).collect();
        assert!((pearson_complete(&xs, &lin).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson_complete(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert!((pearson_complete(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pearson_drops_gaps_pairwise() {
        let xs = [Some(1.0), None, Some(2.0), Some(3.0), Some(9.0)];
        let ys = [Some(1.0), Some(5.0), Some(3.0), Some(2.0), None];
        assert!((pearson(&xs, &ys).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pearson_errors() {
        assert_eq!(
            pearson_complete(&[1.0, 1.0], &[1.0, 2.0]),
            Err(StatsError::ZeroVariance)
        );
        assert_eq!(pearson_complete(&[1.0], &[1.0]), Err(StatsError::TooFewPairs(1)));
        assert_eq!(
            pearson_complete(&[1.0, 2.0], &[1.0]),
            Err(StatsError::LengthMismatch(2, 1))
        );
    }

    fn matrix(cols: Vec<Option<Vec<u32>>>) -> CrockerMatrix {
        let rows = cols.iter().flatten().next().map_or(2, Vec::len);
        CrockerMatrix {
            dimension: 1,
            partition: Partition::new((0..rows).map(|i| i as f64).collect()).unwrap(),
            param_values: (0..cols.len()).map(|i| i as f64).collect(),
            columns: cols,
        }
    }

    #[test]
    fn changepoint_examples() {
        let flat = matrix(vec![Some(vec![2, 1]); 4]);
        assert_eq!(changepoint_score(&flat), vec![0.0; 4]);

        let step = matrix(vec![
            Some(vec![2, 1]),
            Some(vec![2, 1]),
            Some(vec![5, 0]),
            Some(vec![5, 0]),
        ]);
        assert_eq!(changepoint_score(&step), vec![0.0, 0.0, 4.0, 0.0]);

        let three = matrix(vec![Some(vec![1, 1]), Some(vec![1, 2]), Some(vec![4, 4])]);
        assert_eq!(changepoint_score(&three), vec![0.0, 1.0, 5.0]);
        assert_eq!(argmax(&changepoint_score(&three)), Some(2));

        let gap = matrix(vec![Some(vec![1, 1]), None, Some(vec![4, 4])]);
        assert_eq!(changepoint_score(&gap), vec![0.0, 0.0, 6.0]);
    }

    #[test]
    fn local_maxima_examples() {
        assert!(local_maxima(&[1.0, 2.0, 3.0, 4.0]).is_empty());
        assert_eq!(local_maxima(&[0.0, 2.0, 2.0, 1.0]), Vec::<f64>::new());
        let sine: Vec<f64> = (0..=3000)
            .map(|i| (2.0 * std::f64::consts::PI * 3.0 * i as f64 / 3000.0).sin())
            .collect();
        let peaks = local_maxima(&sine);
        assert_eq!(peaks.len(), 3);
        assert!(peaks.iter().all(|p| (p - 1.0).abs() < 1e-3));
    }

    #[test]
    fn level_clustering() {
        assert_eq!(distinct_levels(&[], 0.1), 0);
        assert_eq!(distinct_levels(&[1.0, 1.01, 3.0, 2.99, 1.02], 0.05), 2);
    }

    #[test]
    fn param_ranges() {
        assert_eq!(ParamRange::new(0.0, 1.0, 5).values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(ParamRange::new(0.41, 0.41, 1).values(), vec![0.41]);
        let v = ParamRange::new(0.37, 0.43, 60).values();
        assert_eq!((v[0], v[59], v.len()), (0.37, 0.43, 60));
        assert!(ParamRange::new(1.0, 0.0, 5).validate().is_err());
        assert!(ParamRange::new(1.0, 1.0, 2).validate().is_err());
        assert!(ParamRange::new(0.0, 1.0, 0).validate().is_err());
    }

    #[test]
    fn argmax_prefers_first() {
        assert_eq!(argmax(&[]), None);
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), Some(1));
    }
}
