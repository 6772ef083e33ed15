//! Maximal Lyapunov exponent by the Benettin two-trajectory method.
//!
//! A fiducial trajectory and a companion displaced by `δ0` are advanced
//! together with RK4. After every renormalization interval the log growth
//! `ln(δ/δ0)` is accumulated and the companion is pulled back to distance
//! `δ0` along the current separation direction.

use rayon::prelude::*;

use crate::systems::{out_of_bounds, IntegrationConfig, IntegrationError, Rk4, SystemSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovConfig {
    pub renorm_interval: f64,
    /// Averaging time after the transient.
    pub total_time: f64,
    pub initial_separation: f64,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self {
            renorm_interval: 1.0,
            total_time: 1000.0,
            initial_separation: 1.0e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovEstimate {
    pub lambda: f64,
    pub renorm_interval: f64,
    pub total_time: f64,
    /// Running estimate after each renormalization; the last entry is `lambda`.
    pub convergence_series: Vec<f64>,
    /// Set when the last quarter of the series spreads by more than 20% of
    /// the final value.
    pub non_convergent: bool,
}

impl LyapunovEstimate {
    pub fn converged(&self) -> bool {
        !self.non_convergent
    }
}

pub fn max_lyapunov(
    spec: &SystemSpec,
    cfg: &IntegrationConfig,
    lcfg: &LyapunovConfig,
) -> Result<LyapunovEstimate, IntegrationError> {
    cfg.validate(spec.dimension())?;
    let h = cfg.step_size;
    let steps_per_interval = ((lcfg.renorm_interval / h).round() as usize).max(1);
    let intervals = ((lcfg.total_time / lcfg.renorm_interval).round() as usize).max(1);
    let interval_time = steps_per_interval as f64 * h;
    let bound = cfg.divergence_bound;
    let d0 = lcfg.initial_separation;

    let dim = spec.dimension();
    let mut rk = Rk4::new(dim);
    let mut fiducial = cfg.initial_state.clone();
    for step in 1..=cfg.transient_steps {
        rk.step(spec, &mut fiducial, h);
        if out_of_bounds(&fiducial, bound) {
            return Err(IntegrationError::Divergence { step });
        }
    }

    let mut companion = fiducial.clone();
    companion[0] += d0;

    let mut log_sum = 0.0;
    let mut series = Vec::with_capacity(intervals);
    let mut step = cfg.transient_steps;
    for k in 1..=intervals {
        for _ in 0..steps_per_interval {
            rk.step(spec, &mut fiducial, h);
            rk.step(spec, &mut companion, h);
            step += 1;
            if out_of_bounds(&fiducial, bound) || out_of_bounds(&companion, bound) {
                return Err(IntegrationError::Divergence { step });
            }
        }
        let sep = fiducial
            .iter()
            .zip(&companion)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt();
        if !(sep > 0.0 && sep.is_finite()) {
            // Separation collapsed below resolution or blew up: treat as
            // divergence of the estimate at this step.
            return Err(IntegrationError::Divergence { step });
        }
        log_sum += (sep / d0).ln();
        series.push(log_sum / (k as f64 * interval_time));
        let scale = d0 / sep;
        for (c, f) in companion.iter_mut().zip(&fiducial) {
            *c = f + (*c - f) * scale;
        }
    }

    let lambda = *series.last().expect("at least one interval");
    Ok(LyapunovEstimate {
        lambda,
        renorm_interval: interval_time,
        total_time: intervals as f64 * interval_time,
        non_convergent: spread_flag(&series),
        convergence_series: series,
    })
}

fn spread_flag(series: &[f64]) -> bool {
    let tail = &series[series.len() - series.len().div_ceil(4)..];
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last = series[series.len() - 1].abs();
    hi - lo > 0.2 * last
}

/// One estimate per control-parameter value; diverged runs become `None`.
pub fn lyapunov_curve(
    spec: &SystemSpec,
    cfg: &IntegrationConfig,
    lcfg: &LyapunovConfig,
    param_values: &[f64],
) -> Vec<Option<LyapunovEstimate>> {
    param_values
        .par_iter()
        .map(|&p| {
            let s = spec.with_control(p).ok()?;
            max_lyapunov(&s, cfg, lcfg).ok()
        })
        .collect()
}
