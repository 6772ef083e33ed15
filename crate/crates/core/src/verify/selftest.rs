//! Embedded self-test: named checks grouped by module, run from the CLI.
//!
//! Every check compares a fast-path result against an oracle, a closed form
//! or an invariant. A [`Fault`] corrupts one fast-path result before it is
//! compared, which is how the suite shows that it can fail.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::{betti_at_threshold, brute_greedy, direct_lyapunov, naive_barcodes};
use crate::crocker::{betti_vector, crocker_matrix, make_partition, Partition};
use crate::lyapunov::{max_lyapunov, LyapunovConfig};
use crate::persistence::{build_filtration, persistence_h0, persistence_h1, Barcode, Interval};
use crate::pointcloud::{covering_radius, distance_matrix, euclidean, greedy_order, DistanceMatrix, PointCloud};
use crate::sweep::{pearson_complete, run_sweep_on, ParamRange, SweepConfig};
use crate::systems::{integrate, lorenz, lorenz_field, rossler, rossler_field, IntegrationConfig, SystemSpec};

/// Corruptions a check can apply to its own fast-path result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Nudge every integrated state by 1e-3.
    IntegratorBias,
    /// Add 0.1 to every Lyapunov estimate.
    LyapunovBias,
    /// Swap two entries of every greedy order.
    GreedySwap,
    /// Drop the longest H1 interval of every barcode.
    DropH1Interval,
    /// Add 1 to the first entry of every Betti vector.
    BettiOffByOne,
    /// Reverse the columns of every sweep result.
    SweepColumnOrder,
}

impl Fault {
    pub const ALL: [Fault; 6] = [
        Fault::IntegratorBias,
        Fault::LyapunovBias,
        Fault::GreedySwap,
        Fault::DropH1Interval,
        Fault::BettiOffByOne,
        Fault::SweepColumnOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fault::IntegratorBias => "integrator-bias",
            Fault::LyapunovBias => "lyapunov-bias",
            Fault::GreedySwap => "greedy-swap",
            Fault::DropH1Interval => "drop-h1-interval",
            Fault::BettiOffByOne => "betti-off-by-one",
            Fault::SweepColumnOrder => "sweep-column-order",
        }
    }

    pub fn parse(s: &str) -> Option<Fault> {
        Fault::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SelftestOptions {
    /// Substring matched against `module::name`.
    pub filter: Option<String>,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub results: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failed(&self) -> usize {
        self.results.iter().filter(|r| !r.passed).count()
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .results
            .iter()
            .map(|r| r.module.len() + r.name.len() + 2)
            .max()
            .unwrap_or(10);
        for r in &self.results {
            let label = format!("{}::{}", r.module, r.name);
            writeln!(
                f,
                "{} {label:<width$} {:>9.1} ms  {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.elapsed.as_secs_f64() * 1e3,
                r.detail
            )?;
        }
        write!(
            f,
            "{} checks, {} passed, {} failed",
            self.results.len(),
            self.results.len() - self.failed(),
            self.failed()
        )
    }
}

struct Ctx {
    fault: Option<Fault>,
}

impl Ctx {
    fn integrate(&self, spec: &SystemSpec, cfg: &IntegrationConfig) -> Result<Vec<Vec<f64>>, String> {
        let traj = integrate(spec, cfg).map_err(|e| e.to_string())?;
        let mut states: Vec<Vec<f64>> = traj.states().map(<[f64]>::to_vec).collect();
        if self.fault == Some(Fault::IntegratorBias) {
            states.iter_mut().flatten().for_each(|v| *v += 1e-3);
        }
        Ok(states)
    }

    fn lyapunov(&self, spec: &SystemSpec, cfg: &IntegrationConfig, lcfg: &LyapunovConfig) -> Result<f64, String> {
        let est = max_lyapunov(spec, cfg, lcfg).map_err(|e| e.to_string())?;
        Ok(est.lambda
            + if self.fault == Some(Fault::LyapunovBias) {
                0.1
            } else {
                0.0
            })
    }

    fn greedy(&self, cloud: &PointCloud, k: usize, seed: usize) -> Result<Vec<usize>, String> {
        let mut order = greedy_order(cloud, k, seed).map_err(|e| e.to_string())?;
        if self.fault == Some(Fault::GreedySwap) && order.len() >= 3 {
            order.swap(1, 2);
        }
        Ok(order)
    }

    fn barcodes(&self, dm: &DistanceMatrix) -> Result<(Barcode, Barcode), String> {
        let filt = build_filtration(dm);
        let h0 = persistence_h0(&filt);
        let mut h1 = persistence_h1(&filt).map_err(|e| e.to_string())?;
        if self.fault == Some(Fault::DropH1Interval) {
            if let Some(k) =
                (0..h1.intervals.len()).max_by(|&a, &b| h1.intervals[a].length().total_cmp(&h1.intervals[b].length()))
            {
                h1.intervals.remove(k);
            }
        }
        Ok((h0, h1))
    }

    fn betti(&self, bc: &Barcode, part: &Partition) -> Vec<u32> {
        let mut counts = betti_vector(bc, part).counts;
        if self.fault == Some(Fault::BettiOffByOne) {
            counts[0] += 1;
        }
        counts
    }
}

type CheckFn = fn(&Ctx) -> Result<String, String>;

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("systems", "decay_closed_form", decay_closed_form),
    ("systems", "rk4_fourth_order", rk4_fourth_order),
    ("systems", "harmonic_energy", harmonic_energy),
    ("systems", "field_formulas", field_formulas),
    ("systems", "transient_is_suffix", transient_is_suffix),
    ("lyapunov", "linear_rates", linear_rates),
    ("lyapunov", "harmonic_neutral", harmonic_neutral),
    ("lyapunov", "lorenz_vs_direct", lorenz_vs_direct),
    ("pointcloud", "greedy_matches_brute", greedy_matches_brute),
    ("pointcloud", "greedy_prefix", greedy_prefix),
    ("pointcloud", "covering_radius_monotone", covering_radius_monotone),
    ("pointcloud", "distance_metric", distance_metric),
    ("persistence", "oracle_equivalence", oracle_equivalence),
    ("persistence", "threshold_betti", threshold_betti),
    ("persistence", "h0_count_law", h0_count_law),
    ("persistence", "square_loop", square_loop),
    ("persistence", "scaling_covariance", scaling_covariance),
    ("persistence", "permutation_invariance", permutation_invariance),
    ("crocker", "pointwise_membership", pointwise_membership),
    ("crocker", "betti0_monotone", betti0_monotone),
    ("crocker", "l1_column_sum", l1_column_sum),
    ("crocker", "partition_refinement", partition_refinement),
    ("crocker", "line_example", line_example),
    ("sweep", "pearson_known_values", pearson_known_values),
    ("sweep", "determinism", determinism),
    ("sweep", "order_invariance", order_invariance),
    ("sweep", "gap_propagation", gap_propagation),
];

/// Names of all checks as `module::name`.
pub fn check_names() -> Vec<String> {
    CHECKS.iter().map(|(m, n, _)| format!("{m}::{n}")).collect()
}

pub fn run_selftest(opts: &SelftestOptions) -> SelftestReport {
    let ctx = Ctx { fault: opts.fault };
    let results = CHECKS
        .iter()
        .filter(|(m, n, _)| opts.filter.as_deref().is_none_or(|f| format!("{m}::{n}").contains(f)))
        .map(|&(module, name, check)| {
            let start = Instant::now();
            let outcome = check(&ctx);
            let elapsed = start.elapsed();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                module,
                name,
                passed,
                detail,
                elapsed,
            }
        })
        .collect();
    SelftestReport { results }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn decay() -> SystemSpec {
    SystemSpec::new("decay", 1, &[("k", 1.0)], "k", |s, p, o| o[0] = -p[0] * s[0]).expect("valid system")
}

fn oscillator() -> SystemSpec {
    SystemSpec::new("harmonic", 2, &[("w", 1.0)], "w", |s, p, o| {
        o[0] = s[1];
        o[1] = -p[0] * p[0] * s[0];
    })
    .expect("valid system")
}

fn random_cloud(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> PointCloud {
    let coords = (0..n * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    PointCloud::new(dim, coords).expect("non-empty cloud")
}

fn decay_closed_form(ctx: &Ctx) -> Result<String, String> {
    let states = ctx.integrate(&decay(), &IntegrationConfig::new(vec![1.0], 0.01, 100, 0))?;
    let got = states.last().unwrap()[0];
    let err = (got - (-1.0f64).exp()).abs();
    ensure(err < 1e-6, || format!("x(1) = {got}, error {err:.2e}"))?;
    Ok(format!("error {err:.1e}"))
}

fn rk4_fourth_order(ctx: &Ctx) -> Result<String, String> {
    let err = |h: f64| -> Result<f64, String> {
        let n = (2.0 / h).round() as usize;
        let s = ctx.integrate(&decay(), &IntegrationConfig::new(vec![1.0], h, n, 0))?;
        Ok((s.last().unwrap()[0] - (-2.0f64).exp()).abs())
    };
    let ratio = err(0.1)? / err(0.05)?;
    ensure((12.0..20.0).contains(&ratio), || {
        format!("error ratio {ratio:.2}, expected about 16")
    })?;
    Ok(format!("halving h divides error by {ratio:.2}"))
}

fn harmonic_energy(ctx: &Ctx) -> Result<String, String> {
    let s = ctx.integrate(&oscillator(), &IntegrationConfig::new(vec![1.0, 0.0], 0.01, 1000, 0))?;
    let worst = s
        .iter()
        .map(|x| (x[0] * x[0] + x[1] * x[1] - 1.0).abs())
        .fold(0.0, f64::max);
    ensure(worst < 1e-6, || format!("energy drift {worst:.2e}"))?;
    let end = s.last().unwrap();
    let err = (end[0] - 10f64.cos()).abs().max((end[1] + 10f64.sin()).abs());
    ensure(err < 1e-6, || format!("x(10) off by {err:.2e}"))?;
    Ok(format!("energy drift {worst:.1e}"))
}

fn field_formulas(_: &Ctx) -> Result<String, String> {
    let p = [1.5, -0.5, 2.0];
    let r = rossler_field(&p, 0.2, 0.2, 5.7);
    let want_r = [0.5 - 2.0, 1.5 + 0.2 * -0.5, 0.2 + 2.0 * (1.5 - 5.7)];
    let l = lorenz_field(&p, 10.0, 28.0, 8.0 / 3.0);
    let want_l = [
        10.0 * (-0.5 - 1.5),
        1.5 * (28.0 - 2.0) + 0.5,
        1.5 * -0.5 - 8.0 / 3.0 * 2.0,
    ];
    for (got, want) in r.iter().chain(&l).zip(want_r.iter().chain(&want_l)) {
        ensure((got - want).abs() < 1e-12, || format!("{got} != {want}"))?;
    }
    let via_spec = rossler().with_control(0.2).map_err(|e| e.to_string())?.eval(&p);
    ensure(via_spec[2] == rossler_field(&p, 0.2, 2.0, 4.0)[2], || {
        "spec routing".into()
    })?;
    Ok("Rössler and Lorenz match at a test point".into())
}

fn transient_is_suffix(ctx: &Ctx) -> Result<String, String> {
    let spec = lorenz().with_control(28.0).map_err(|e| e.to_string())?;
    let full = ctx.integrate(&spec, &IntegrationConfig::new(vec![1.0, 1.0, 1.0], 0.01, 500, 0))?;
    let cut = ctx.integrate(&spec, &IntegrationConfig::new(vec![1.0, 1.0, 1.0], 0.01, 500, 200))?;
    ensure(cut.as_slice() == &full[200..], || {
        "retained states differ from the untruncated run".into()
    })?;
    Ok("300 retained states match".into())
}

fn linear_rates(ctx: &Ctx) -> Result<String, String> {
    let cfg = IntegrationConfig::new(vec![1.0], 0.01, 100, 0);
    let lcfg = LyapunovConfig {
        total_time: 50.0,
        ..Default::default()
    };
    for k in [0.5, 1.0, 2.5] {
        let spec = decay().with_param("k", k).map_err(|e| e.to_string())?;
        let l = ctx.lyapunov(&spec, &cfg, &lcfg)?;
        ensure((l + k).abs() < 1e-3, || format!("k = {k}: λ = {l}"))?;
    }
    Ok("λ = -k for k in {0.5, 1, 2.5}".into())
}

fn harmonic_neutral(ctx: &Ctx) -> Result<String, String> {
    let l = ctx.lyapunov(
        &oscillator(),
        &IntegrationConfig::new(vec![1.0, 0.0], 0.01, 100, 0),
        &LyapunovConfig::default(),
    )?;
    ensure(l.abs() < 0.05, || format!("λ = {l}"))?;
    Ok(format!("λ = {l:.4}"))
}

fn lorenz_vs_direct(ctx: &Ctx) -> Result<String, String> {
    let spec = lorenz().with_control(28.0).map_err(|e| e.to_string())?;
    let x0 = [1.0, 1.0, 1.0];
    let cfg = IntegrationConfig::new(x0.to_vec(), 0.01, 4_000, 2_000);
    let fast = ctx.lyapunov(&spec, &cfg, &LyapunovConfig::default())?;
    let direct = direct_lyapunov(&spec, &x0, 0.01, 20.0, 1000.0);
    ensure((fast - direct).abs() < 0.1, || {
        format!("Benettin {fast:.4} vs direct {direct:.4}")
    })?;
    ensure(fast > 0.7 && fast < 1.1, || format!("λ = {fast:.4} outside (0.7, 1.1)"))?;
    Ok(format!("Benettin {fast:.4}, direct {direct:.4}"))
}

fn greedy_matches_brute(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..50 {
        let n = rng.gen_range(2..40);
        let cloud = random_cloud(&mut rng, n, 3);
        let k = rng.gen_range(1..=n);
        let seed = rng.gen_range(0..n);
        let fast = ctx.greedy(&cloud, k, seed)?;
        let slow = brute_greedy(&cloud, k, seed);
        ensure(fast == slow, || format!("trial {trial}: {fast:?} vs {slow:?}"))?;
    }
    Ok("50 random clouds".into())
}

fn greedy_prefix(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cloud = random_cloud(&mut rng, 80, 3);
    let full = ctx.greedy(&cloud, 80, 0)?;
    for k in [1, 2, 5, 17, 40, 79] {
        let part = ctx.greedy(&cloud, k, 0)?;
        ensure(part[..] == full[..k], || format!("k = {k} is not a prefix"))?;
    }
    Ok("orders for smaller k are prefixes".into())
}

fn covering_radius_monotone(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let cloud = random_cloud(&mut rng, 120, 3);
    let order = ctx.greedy(&cloud, 60, 0)?;
    let radii: Vec<f64> = (1..=60).map(|k| covering_radius(&cloud, &order[..k])).collect();
    ensure(radii.windows(2).all(|w| w[1] <= w[0]), || {
        "covering radius increased".into()
    })?;
    // Greedy is a 2-approximation: the radius never exceeds twice the
    // smallest pairwise distance among the chosen points.
    for k in 2..=60 {
        let sep = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .map(|(a, b)| euclidean(cloud.point(order[a]), cloud.point(order[b])))
            .fold(f64::INFINITY, f64::min);
        ensure(radii[k - 1] <= sep + 1e-12, || {
            format!("k = {k}: radius {} > separation {sep}", radii[k - 1])
        })?;
    }
    Ok(format!("radius {:.3} -> {:.3}", radii[0], radii[59]))
}

fn distance_metric(_: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let cloud = random_cloud(&mut rng, 30, 3);
    let dm = distance_matrix(&cloud);
    let n = dm.size();
    for i in 0..n {
        ensure(dm.get(i, i) == 0.0, || format!("d({i},{i}) != 0"))?;
        for j in 0..n {
            ensure(dm.get(i, j) == dm.get(j, i), || format!("asymmetric at ({i},{j})"))?;
            for k in 0..n {
                ensure(dm.get(i, k) <= dm.get(i, j) + dm.get(j, k) + 1e-12, || {
                    format!("triangle inequality fails at ({i},{j},{k})")
                })?;
            }
        }
    }
    Ok("symmetric, zero diagonal, triangle inequality".into())
}

fn oracle_equivalence(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut loops = 0;
    for trial in 0..60 {
        let n = rng.gen_range(3..=8);
        let dim = rng.gen_range(2..=3);
        let dm = distance_matrix(&random_cloud(&mut rng, n, dim));
        let (h0, h1) = ctx.barcodes(&dm)?;
        let (o0, o1) = naive_barcodes(&dm);
        ensure(h0.approx_eq(&o0, 1e-12), || {
            format!("trial {trial}: H0 {:?} vs {:?}", h0.intervals, o0.intervals)
        })?;
        ensure(h1.approx_eq(&o1, 1e-12), || {
            format!("trial {trial}: H1 {:?} vs {:?}", h1.intervals, o1.intervals)
        })?;
        loops += h1.len();
    }
    // Planar polygons guarantee some H1 classes.
    for n in 4..=8 {
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                [t.cos(), 0.8 * t.sin()]
            })
            .collect();
        let dm = distance_matrix(&PointCloud::from_points(&pts).expect("points"));
        let (_, h1) = ctx.barcodes(&dm)?;
        let (_, o1) = naive_barcodes(&dm);
        ensure(h1.approx_eq(&o1, 1e-12), || {
            format!("{n}-gon: {:?} vs {:?}", h1.intervals, o1.intervals)
        })?;
        loops += h1.len();
    }
    ensure(loops > 0, || "no H1 intervals were exercised".into())?;
    Ok(format!("65 clouds, {loops} H1 intervals"))
}

fn threshold_betti(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut probes = 0;
    for trial in 0..50 {
        let n = rng.gen_range(3..=8);
        let dm = distance_matrix(&random_cloud(&mut rng, n, 2));
        let (h0, h1) = ctx.barcodes(&dm)?;
        let mut values: Vec<f64> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| dm.get(i, j))
            .collect();
        values.push(0.0);
        values.sort_by(f64::total_cmp);
        let mut eps: Vec<f64> = values.clone();
        eps.extend(values.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        for e in eps {
            let want = betti_at_threshold(&dm, e);
            let got = (h0.betti_at(e), h1.betti_at(e));
            ensure(got == want, || format!("trial {trial}, ε = {e}: {got:?} vs {want:?}"))?;
            probes += 1;
        }
    }
    Ok(format!("{probes} thresholds on 50 clouds"))
}

fn h0_count_law(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [1, 2, 7, 30, 100] {
        let dm = distance_matrix(&random_cloud(&mut rng, n, 3));
        let (h0, _) = ctx.barcodes(&dm)?;
        ensure(h0.len() == n && h0.infinite_count() == 1, || {
            format!("n = {n}: {} intervals, {} infinite", h0.len(), h0.infinite_count())
        })?;
        ensure(h0.intervals.iter().all(|iv| iv.birth == 0.0), || {
            "H0 birth not 0".into()
        })?;
    }
    Ok("n intervals, exactly one infinite".into())
}

fn square_loop(ctx: &Ctx) -> Result<String, String> {
    let dm =
        distance_matrix(&PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).expect("points"));
    let (_, h1) = ctx.barcodes(&dm)?;
    ensure(h1.intervals == vec![Interval::new(1.0, 2f64.sqrt())], || {
        format!("{:?}", h1.intervals)
    })?;
    Ok("unit square: [1, √2)".into())
}

fn scaling_covariance(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for c in [0.5, 3.0] {
        let dm = distance_matrix(&random_cloud(&mut rng, 40, 3));
        let (a0, a1) = ctx.barcodes(&dm)?;
        let (b0, b1) = ctx.barcodes(&dm.scaled(c))?;
        ensure(
            b0.approx_eq(&a0.scaled(c), 1e-9) && b1.approx_eq(&a1.scaled(c), 1e-9),
            || format!("scaling by {c} broke covariance"),
        )?;
    }
    Ok("c = 0.5, 3".into())
}

fn permutation_invariance(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let dm = distance_matrix(&random_cloud(&mut rng, 40, 3));
    let mut perm: Vec<usize> = (0..40).collect();
    for i in (1..40).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let (a0, a1) = ctx.barcodes(&dm)?;
    let (b0, b1) = ctx.barcodes(&dm.permuted(&perm))?;
    ensure(a0.approx_eq(&b0, 1e-12) && a1.approx_eq(&b1, 1e-12), || {
        "relabeling changed the barcode".into()
    })?;
    Ok(format!("{} H1 intervals unchanged", a1.len()))
}

fn random_barcode(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> Barcode {
    let iv = (0..n)
        .map(|_| {
            let b = if dim == 0 { 0.0 } else { rng.gen_range(0.0..1.0) };
            let d = if rng.gen_bool(0.1) {
                f64::INFINITY
            } else {
                b + rng.gen_range(0.0..1.0)
            };
            Interval::new(b, d)
        })
        .collect();
    Barcode::new(dim, iv)
}

fn pointwise_membership(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for trial in 0..50 {
        let n = rng.gen_range(0..30);
        let bc = random_barcode(&mut rng, trial % 2, n);
        let part = make_partition(2.0, rng.gen_range(2..40)).map_err(|e| e.to_string())?;
        let counts = ctx.betti(&bc, &part);
        for (e, &c) in part.values().iter().zip(&counts) {
            let want = bc.intervals.iter().filter(|iv| iv.birth <= *e && *e < iv.death).count();
            ensure(c as usize == want, || format!("trial {trial}, ε = {e}: {c} vs {want}"))?;
        }
    }
    Ok("50 random barcodes".into())
}

fn betti0_monotone(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..20 {
        let dm = distance_matrix(&random_cloud(&mut rng, 50, 3));
        let (h0, _) = ctx.barcodes(&dm)?;
        let part = make_partition(2.0, 100).map_err(|e| e.to_string())?;
        let counts = ctx.betti(&h0, &part);
        ensure(counts.windows(2).all(|w| w[1] <= w[0]), || {
            format!("Bv0 increases: {counts:?}")
        })?;
        ensure(counts[0] == 50, || format!("Bv0(0) = {}, expected 50", counts[0]))?;
    }
    Ok("non-increasing, starts at n".into())
}

fn l1_column_sum(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let bcs: Vec<Barcode> = (0..6).map(|_| random_barcode(&mut rng, 1, 12)).collect();
    let part = make_partition(1.5, 30).map_err(|e| e.to_string())?;
    let params: Vec<f64> = (0..6).map(f64::from).collect();
    let cm = crocker_matrix(&bcs, &part, &params).map_err(|e| e.to_string())?;
    for (j, (bc, l1)) in bcs.iter().zip(cm.l1_curve()).enumerate() {
        let counts = ctx.betti(bc, &part);
        let sum: u64 = counts.iter().map(|&c| u64::from(c)).sum();
        ensure(l1 == Some(sum), || format!("column {j}: L1 {l1:?} vs sum {sum}"))?;
    }
    Ok("6 columns".into())
}

fn partition_refinement(ctx: &Ctx) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let coarse = make_partition(2.0, 11).map_err(|e| e.to_string())?;
    let fine = make_partition(2.0, 101).map_err(|e| e.to_string())?;
    for _ in 0..20 {
        let bc = random_barcode(&mut rng, 1, 20);
        let a = ctx.betti(&bc, &coarse);
        let b = ctx.betti(&bc, &fine);
        for (i, &v) in a.iter().enumerate() {
            ensure(v == b[i * 10], || {
                format!("ε = {}: {v} vs {}", coarse.values()[i], b[i * 10])
            })?;
        }
    }
    Ok("shared grid points agree".into())
}

fn line_example(ctx: &Ctx) -> Result<String, String> {
    let mut x = 0.0;
    let mut pts = vec![[x]];
    for gap in [0.05].iter().chain(&[0.1; 8]).chain(&[0.2; 9]) {
        x += gap;
        pts.push([x]);
    }
    let dm = distance_matrix(&PointCloud::from_points(&pts).expect("points"));
    let (h0, _) = ctx.barcodes(&dm)?;
    let part = Partition::new(vec![0.0, 0.07, 0.15, 0.23, 0.34, 0.44, 0.54]).map_err(|e| e.to_string())?;
    let counts = ctx.betti(&h0, &part);
    ensure(counts == [19, 18, 10, 1, 1, 1, 1], || format!("{counts:?}"))?;
    Ok("(19, 18, 10, 1, 1, 1, 1)".into())
}

fn pearson_known_values(_: &Ctx) -> Result<String, String> {
    let r = pearson_complete(&[1.0, 2.0, 3.0, 4.0], &[2.0, 4.0, 6.0, 8.0]).map_err(|e| e.to_string())?;
    ensure((r - 1.0).abs() < 1e-12, || format!("r = {r}"))?;
    let r = pearson_complete(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).map_err(|e| e.to_string())?;
    ensure((r + 1.0).abs() < 1e-12, || format!("r = {r}"))?;
    let r = pearson_complete(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).map_err(|e| e.to_string())?;
    ensure((r - 0.8).abs() < 1e-12, || format!("r = {r}, expected 0.8"))?;
    Ok("+1, -1, 0.8".into())
}

fn small_sweep_config() -> Result<SweepConfig, String> {
    let mut cfg = SweepConfig::for_system(rossler(), ParamRange::new(0.37, 0.43, 4)).map_err(|e| e.to_string())?;
    cfg.integration = IntegrationConfig::new(vec![-0.4, 0.6, 1.0], 0.01, 6_000, 2_000);
    cfg.subsample_count = 60;
    cfg.lyapunov.total_time = 50.0;
    Ok(cfg)
}

fn sweep(ctx: &Ctx, cfg: &SweepConfig, params: &[f64]) -> Result<crate::sweep::SweepResult, String> {
    let mut r = run_sweep_on(cfg, params).map_err(|e| e.to_string())?;
    if ctx.fault == Some(Fault::SweepColumnOrder) {
        for cm in &mut r.crocker {
            cm.columns.reverse();
        }
        r.l1_curves.iter_mut().for_each(|c| c.reverse());
    }
    Ok(r)
}

fn determinism(ctx: &Ctx) -> Result<String, String> {
    let cfg = small_sweep_config()?;
    let params = cfg.param_range.values();
    let a = sweep(ctx, &cfg, &params)?;
    let mut serial = cfg.clone();
    serial.jobs = Some(1);
    let b = sweep(ctx, &serial, &params)?;
    ensure(a.crocker == b.crocker && a.l1_curves == b.l1_curves, || {
        "CROCKER matrices differ".into()
    })?;
    ensure(a.lambda_curve() == b.lambda_curve(), || "Lyapunov curves differ".into())?;
    ensure(a.barcodes == b.barcodes, || "barcodes differ".into())?;
    Ok("parallel and single-threaded runs agree".into())
}

fn order_invariance(ctx: &Ctx) -> Result<String, String> {
    let mut cfg = small_sweep_config()?;
    cfg.compute_lyapunov = false;
    let params = cfg.param_range.values();
    let a = sweep(ctx, &cfg, &params)?;
    // Unfaulted reference run on the reversed order.
    let b = run_sweep_on(&cfg, &params.iter().rev().copied().collect::<Vec<_>>()).map_err(|e| e.to_string())?;
    for (ca, cb) in a.crocker.iter().zip(&b.crocker) {
        let mut rev = cb.columns.clone();
        rev.reverse();
        ensure(ca.columns == rev && ca.partition == cb.partition, || {
            format!("dimension {} depends on sweep order", ca.dimension)
        })?;
    }
    Ok("reversed sweep gives reversed columns".into())
}

fn gap_propagation(ctx: &Ctx) -> Result<String, String> {
    // x' = k x, y' = -y: diverges for k = 1 within 200 steps of h = 0.1.
    let spec = SystemSpec::new("split", 2, &[("k", 0.0)], "k", |s, p, o| {
        o[0] = p[0] * s[0];
        o[1] = -s[1] + (s[0] * 7.0).sin();
    })
    .map_err(|e| e.to_string())?;
    let mut cfg = SweepConfig {
        integration: IntegrationConfig::new(vec![1.0, 0.0], 0.1, 300, 100),
        ..small_sweep_config()?
    };
    cfg.system = spec;
    cfg.subsample_count = 30;
    cfg.compute_lyapunov = false;
    let r = sweep(ctx, &cfg, &[-0.5, 1.0, -0.2])?;
    ensure(r.failures[1].is_some() && r.failures[0].is_none(), || {
        format!("{:?}", r.failures)
    })?;
    for cm in &r.crocker {
        ensure(
            cm.columns[1].is_none() && cm.columns[0].is_some() && cm.columns[2].is_some(),
            || format!("dimension {}: gap not in column 1", cm.dimension),
        )?;
    }
    ensure(r.l1_curves.iter().all(|c| c[1].is_none() && c[0].is_some()), || {
        "L1 gap missing".into()
    })?;
    Ok(format!("gap at k = 1: {}", r.failures[1].as_deref().unwrap_or("")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let report = run_selftest(&SelftestOptions::default());
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.results.len(), CHECKS.len());
    }

    #[test]
    fn every_fault_is_caught_by_its_module() {
        let module = |f: Fault| match f {
            Fault::IntegratorBias => "systems",
            Fault::LyapunovBias => "lyapunov",
            Fault::GreedySwap => "pointcloud",
            Fault::DropH1Interval => "persistence",
            Fault::BettiOffByOne => "crocker",
            Fault::SweepColumnOrder => "sweep",
        };
        for fault in Fault::ALL {
            let report = run_selftest(&SelftestOptions {
                filter: Some(format!("{}::", module(fault))),
                fault: Some(fault),
            });
            assert!(!report.all_passed(), "{} went unnoticed:\n{report}", fault.name());
            assert_eq!(Fault::parse(fault.name()), Some(fault));
        }
    }

    #[test]
    fn filter_selects_by_module() {
        let report = run_selftest(&SelftestOptions {
            filter: Some("crocker::".into()),
            fault: None,
        });
        assert!(report.results.iter().all(|r| r.module == "crocker"));
        assert_eq!(report.results.len(), 5);
        assert!(check_names().contains(&"sweep::determinism".to_string()));
    }
}
