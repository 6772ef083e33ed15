//! Parameterized ODE systems and a fixed-step RK4 integrator.
//!
//! A [`SystemSpec`] bundles a vector field with its named parameters. The
//! field writes the derivative into a caller-provided buffer so that the
//! integrator can run without allocating per step.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Vector field signature: `(state, params, out)`, writing `d state / dt`
/// into `out`. Parameters arrive in declaration order.
pub type VectorField = dyn Fn(&[f64], &[f64], &mut [f64]) + Send + Sync;

pub const DEFAULT_DIVERGENCE_BOUND: f64 = 1.0e6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("unknown system `{0}` (available: rossler, lorenz)")]
    UnknownSystem(String),
    #[error("system `{system}` has no parameter `{param}` (available: {available})")]
    UnknownParam {
        system: String,
        param: String,
        available: String,
    },
    #[error("control parameter `{0}` is not one of the system parameters")]
    BadControlParam(String),
    #[error("parameter `{0}` must be finite")]
    NonFiniteParam(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrationError {
    #[error("initial state has dimension {got}, system expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("step size must be positive and finite, got {0}")]
    BadStepSize(f64),
    #[error("total_steps must be positive and exceed transient_steps ({transient} >= {total})")]
    BadStepCounts { total: usize, transient: usize },
    #[error("trajectory diverged at step {step}")]
    Divergence { step: usize },
}

/// A named, parameterized vector field.
#[derive(Clone)]
pub struct SystemSpec {
    name: String,
    dimension: usize,
    field: Arc<VectorField>,
    param_names: Vec<String>,
    param_values: Vec<f64>,
    control: usize,
}

impl fmt::Debug for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemSpec")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("params", &self.params().collect::<Vec<_>>())
            .field("control_param", &self.control_param())
            .finish()
    }
}

impl SystemSpec {
    /// Registers a custom system. `params` are `(name, value)` pairs handed to
    /// the field in this order.
    pub fn new<F>(
        name: impl Into<String>,
        dimension: usize,
        params: &[(&str, f64)],
        control_param: &str,
        field: F,
    ) -> Result<Self, SystemError>
    where
        F: Fn(&[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
    {
        let param_names: Vec<String> = params.iter().map(|(n, _)| n.to_string()).collect();
        let param_values: Vec<f64> = params.iter().map(|&(_, v)| v).collect();
        if let Some((n, _)) = params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(SystemError::NonFiniteParam(n.to_string()));
        }
        let control = param_names
            .iter()
            .position(|n| n == control_param)
            .ok_or_else(|| SystemError::BadControlParam(control_param.to_string()))?;
        Ok(Self {
            name: name.into(),
            dimension,
            field: Arc::new(field),
            param_names,
            param_values,
            control,
        })
    }

    /// Built-in system by name: `"rossler"` or `"lorenz"`.
    pub fn builtin(name: &str) -> Result<Self, SystemError> {
        match name.to_ascii_lowercase().as_str() {
            "rossler" | "rössler" => Ok(rossler()),
            "lorenz" => Ok(lorenz()),
            _ => Err(SystemError::UnknownSystem(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn control_param(&self) -> &str {
        &self.param_names[self.control]
    }

    pub fn control_value(&self) -> f64 {
        self.param_values[self.control]
    }

    pub fn params(&self) -> impl Iterator<Item = (&str, f64)> {
        self.param_names
            .iter()
            .map(String::as_str)
            .zip(self.param_values.iter().copied())
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.param_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.param_values[i])
    }

    /// Raw parameter values in declaration order.
    pub fn param_values(&self) -> &[f64] {
        &self.param_values
    }

    /// Returns a copy with `name` set to `value`.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self, SystemError> {
        let idx = self
            .param_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SystemError::UnknownParam {
                system: self.name.clone(),
                param: name.to_string(),
                available: self.param_names.join(", "),
            })?;
        if !value.is_finite() {
            return Err(SystemError::NonFiniteParam(name.to_string()));
        }
        let mut out = self.clone();
        out.param_values[idx] = value;
        Ok(out)
    }

    /// Returns a copy with the control parameter set to `value`.
    pub fn with_control(&self, value: f64) -> Result<Self, SystemError> {
        self.with_param(self.control_param().to_string().as_str(), value)
    }

    /// Returns a copy whose control parameter is `name`.
    pub fn with_control_param(&self, name: &str) -> Result<Self, SystemError> {
        let idx = self
            .param_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SystemError::UnknownParam {
                system: self.name.clone(),
                param: name.to_string(),
                available: self.param_names.join(", "),
            })?;
        let mut out = self.clone();
        out.control = idx;
        Ok(out)
    }

    /// Evaluates the vector field at `state` into `out`.
    #[inline]
    pub fn eval_into(&self, state: &[f64], out: &mut [f64]) {
        (self.field)(state, &self.param_values, out)
    }

    pub fn eval(&self, state: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        self.eval_into(state, &mut out);
        out
    }

    /// Default integration for the built-ins, `None` for custom systems.
    ///
    /// Rössler: 100 time units of transient, 400 retained. Lorenz: 50 and
    /// 100. Shorter runs leave slowly converging periodic orbits unsettled
    /// near period doublings and make the sampled attractor noisy.
    pub fn default_integration(&self) -> Option<IntegrationConfig> {
        match self.name.as_str() {
            "rossler" => Some(IntegrationConfig::new(vec![-0.4, 0.6, 1.0], 0.01, 50_000, 10_000)),
            "lorenz" => Some(IntegrationConfig::new(vec![1.0e-10, 0.0, 1.0], 0.005, 30_000, 10_000)),
            _ => None,
        }
    }
}

/// Rössler field: `(−y−z, x+a·y, b+z·(x−c))`.
#[inline]
pub fn rossler_field(state: &[f64], a: f64, b: f64, c: f64) -> [f64; 3] {
    let (x, y, z) = (state[0], state[1], state[2]);
    [-y - z, x + a * y, b + z * (x - c)]
}

/// Lorenz field: `(σ(y−x), x(ρ−z)−y, xy−βz)`.
#[inline]
pub fn lorenz_field(state: &[f64], sigma: f64, rho: f64, beta: f64) -> [f64; 3] {
    let (x, y, z) = (state[0], state[1], state[2]);
    [sigma * (y - x), x * (rho - z) - y, x * y - beta * z]
}

/// Rössler with `b = 2`, `c = 4`, control parameter `a`.
pub fn rossler() -> SystemSpec {
    SystemSpec::new(
        "rossler",
        3,
        &[("a", 0.41), ("b", 2.0), ("c", 4.0)],
        "a",
        |s, p, out| out.copy_from_slice(&rossler_field(s, p[0], p[1], p[2])),
    )
    .expect("built-in rossler spec")
}

/// Lorenz with `σ = 10`, `β = 8/3`, control parameter `ρ`.
pub fn lorenz() -> SystemSpec {
    SystemSpec::new(
        "lorenz",
        3,
        &[("sigma", 10.0), ("rho", 100.0), ("beta", 8.0 / 3.0)],
        "rho",
        |s, p, out| out.copy_from_slice(&lorenz_field(s, p[0], p[1], p[2])),
    )
    .expect("built-in lorenz spec")
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationConfig {
    pub initial_state: Vec<f64>,
    pub step_size: f64,
    pub total_steps: usize,
    /// Leading states dropped from the returned trajectory.
    pub transient_steps: usize,
    /// Any component with magnitude above this (or non-finite) is divergence.
    pub divergence_bound: f64,
}

impl IntegrationConfig {
    pub fn new(initial_state: Vec<f64>, step_size: f64, total_steps: usize, transient_steps: usize) -> Self {
        Self {
            initial_state,
            step_size,
            total_steps,
            transient_steps,
            divergence_bound: DEFAULT_DIVERGENCE_BOUND,
        }
    }

    pub fn validate(&self, dimension: usize) -> Result<(), IntegrationError> {
        if self.initial_state.len() != dimension {
            return Err(IntegrationError::DimensionMismatch {
                expected: dimension,
                got: self.initial_state.len(),
            });
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(IntegrationError::BadStepSize(self.step_size));
        }
        if self.total_steps == 0 || self.transient_steps >= self.total_steps {
            return Err(IntegrationError::BadStepCounts {
                total: self.total_steps,
                transient: self.transient_steps,
            });
        }
        Ok(())
    }
}

/// Integrated states, stored row-major (`len × dim`).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    dim: usize,
    states: Vec<f64>,
    pub step_size: f64,
    pub start_time: f64,
}

impl Trajectory {
    pub fn from_states(dim: usize, states: Vec<f64>, step_size: f64, start_time: f64) -> Self {
        assert!(dim > 0 && !states.is_empty() && states.len().is_multiple_of(dim));
        Self {
            dim,
            states,
            step_size,
            start_time,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.states.chunks_exact(self.dim)
    }

    pub fn last(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    /// One coordinate across all states.
    pub fn coordinate(&self, c: usize) -> impl Iterator<Item = f64> + '_ {
        self.states().map(move |s| s[c])
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.states
    }
}

/// Reusable RK4 stepper holding the stage buffers.
pub(crate) struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }

    /// Advances `state` in place by one step of size `h`.
    pub(crate) fn step(&mut self, spec: &SystemSpec, state: &mut [f64], h: f64) {
        let half = 0.5 * h;
        spec.eval_into(state, &mut self.k1);
        for ((t, s), k) in self.tmp.iter_mut().zip(state.iter()).zip(&self.k1) {
            *t = s + half * k;
        }
        spec.eval_into(&self.tmp, &mut self.k2);
        for ((t, s), k) in self.tmp.iter_mut().zip(state.iter()).zip(&self.k2) {
            *t = s + half * k;
        }
        spec.eval_into(&self.tmp, &mut self.k3);
        for ((t, s), k) in self.tmp.iter_mut().zip(state.iter()).zip(&self.k3) {
            *t = s + h * k;
        }
        spec.eval_into(&self.tmp, &mut self.k4);
        let sixth = h / 6.0;
        for (i, s) in state.iter_mut().enumerate() {
            *s += sixth * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

#[inline]
pub(crate) fn out_of_bounds(state: &[f64], bound: f64) -> bool {
    state.iter().any(|v| !v.is_finite() || v.abs() > bound)
}

/// Integrates with classical RK4.
///
/// The run takes `total_steps` steps from the initial state and records the
/// state after each one; the first `transient_steps` of those are discarded.
/// The first retained state sits at `(transient_steps + 1) * step_size`.
pub fn integrate(spec: &SystemSpec, cfg: &IntegrationConfig) -> Result<Trajectory, IntegrationError> {
    cfg.validate(spec.dimension())?;
    let dim = spec.dimension();
    let kept = cfg.total_steps - cfg.transient_steps;
    let mut states = Vec::with_capacity(kept * dim);
    let mut state = cfg.initial_state.clone();
    let mut rk = Rk4::new(dim);
    if out_of_bounds(&state, cfg.divergence_bound) {
        return Err(IntegrationError::Divergence { step: 0 });
    }
    for k in 1..=cfg.total_steps {
        rk.step(spec, &mut state, cfg.step_size);
        if out_of_bounds(&state, cfg.divergence_bound) {
            return Err(IntegrationError::Divergence { step: k });
        }
        if k > cfg.transient_steps {
            states.extend_from_slice(&state);
        }
    }
    Ok(Trajectory::from_states(
        dim,
        states,
        cfg.step_size,
        (cfg.transient_steps + 1) as f64 * cfg.step_size,
    ))
}
