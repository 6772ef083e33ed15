use crocker::export::{read_barcodes_csv, read_crocker_csv, write_barcodes_csv, write_sweep_dir};
use crocker::lyapunov::{max_lyapunov, LyapunovConfig};
use crocker::persistence::{build_filtration, persistence_h0, persistence_h1, Interval};
use crocker::pointcloud::{distance_matrix, PointCloud};
use crocker::sweep::{
    analyze_parameter, bifurcation_samples, distinct_levels, pearson, run_sweep, run_sweep_on, ParamRange, SweepConfig,
    SweepError,
};
use crocker::systems::{integrate, lorenz, rossler, IntegrationConfig, SystemSpec, Trajectory};
use crocker::verify::oracle::direct_lyapunov;
use crocker::{betti_vector, make_partition, Partition};

fn quick_rossler(count: usize) -> SweepConfig {
    let mut cfg = SweepConfig::for_system(rossler(), ParamRange::new(0.37, 0.43, count)).unwrap();
    cfg.integration = IntegrationConfig::new(vec![-0.4, 0.6, 1.0], 0.01, 8_000, 3_000);
    cfg.subsample_count = 80;
    cfg.lyapunov.total_time = 100.0;
    cfg
}

#[test]
fn lorenz_classic_lambda_agrees_with_direct_method() {
    let spec = lorenz().with_control(28.0).unwrap();
    let cfg = IntegrationConfig::new(vec![1.0, 1.0, 1.0], 0.01, 4_000, 2_000);
    let est = max_lyapunov(&spec, &cfg, &LyapunovConfig::default()).unwrap();
    let direct = direct_lyapunov(&spec, &[1.0, 1.0, 1.0], 0.01, 20.0, 1000.0);
    assert!((est.lambda - direct).abs() < 0.1, "{} vs {direct}", est.lambda);
    assert!(est.converged());
}

#[test]
fn halving_initial_separation_barely_moves_lambda() {
    let spec = lorenz().with_control(28.0).unwrap();
    let cfg = IntegrationConfig::new(vec![1.0, 1.0, 1.0], 0.01, 4_000, 2_000);
    let a = max_lyapunov(&spec, &cfg, &LyapunovConfig::default()).unwrap().lambda;
    let half = LyapunovConfig {
        initial_separation: 0.5e-8,
        ..Default::default()
    };
    let b = max_lyapunov(&spec, &cfg, &half).unwrap().lambda;
    assert!((a - b).abs() < 0.05 * a.abs(), "{a} vs {b}");
}

#[test]
fn rossler_low_a_is_periodic() {
    let spec = rossler().with_control(0.37).unwrap();
    let cfg = spec.default_integration().unwrap();
    let maxima = bifurcation_samples(&integrate(&spec, &cfg).unwrap(), 0);
    assert!(maxima.len() > 20);
    assert!(
        distinct_levels(&maxima, 0.05) <= 2,
        "{} levels",
        distinct_levels(&maxima, 0.05)
    );
}

#[test]
fn sine_maxima_sit_at_the_amplitude() {
    let h = 0.001;
    let states: Vec<f64> = (0..=(3.0 * std::f64::consts::TAU / h) as usize)
        .map(|i| 2.5 * (i as f64 * h).sin())
        .collect();
    let traj = Trajectory::from_states(1, states, h, 0.0);
    let maxima = bifurcation_samples(&traj, 0);
    assert_eq!(maxima.len(), 3);
    assert!(maxima.iter().all(|m| (m - 2.5).abs() < 1e-3));
}

#[test]
fn pearson_hand_example() {
    let w = |v: &[f64]| v.iter().copied().map(Some).collect::<Vec<_>>();
    let r = pearson(&w(&[1.0, 2.0, 3.0]), &w(&[1.0, 3.0, 2.0])).unwrap();
    assert!((r - 0.5).abs() < 1e-12);
}

#[test]
fn square_cloud_betti_vectors() {
    let cloud = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
    let f = build_filtration(&distance_matrix(&cloud));
    let h0 = persistence_h0(&f);
    let h1 = persistence_h1(&f).unwrap();
    assert_eq!(h1.intervals, vec![Interval::new(1.0, 2f64.sqrt())]);
    let p = Partition::new(vec![0.0, 1.0, 1.2, 1.5]).unwrap();
    assert_eq!(betti_vector(&h0, &p).counts, vec![4, 1, 1, 1]);
    assert_eq!(betti_vector(&h1, &p).counts, vec![0, 1, 1, 0]);
}

#[test]
fn nineteen_point_line() {
    let gaps = [0.05].iter().chain(&[0.1; 8]).chain(&[0.2; 9]).copied();
    let mut pts = vec![[0.0]];
    let mut x = 0.0;
    for g in gaps {
        x += g;
        pts.push([x]);
    }
    let f = build_filtration(&distance_matrix(&PointCloud::from_points(&pts).unwrap()));
    let p = Partition::new(vec![0.0, 0.07, 0.15, 0.23, 0.34, 0.44, 0.54]).unwrap();
    let bv = betti_vector(&persistence_h0(&f), &p);
    assert_eq!(bv.counts, vec![19, 18, 10, 1, 1, 1, 1]);
    assert_eq!(bv.l1_norm(), 51);
}

#[test]
fn sweep_is_order_invariant() {
    let cfg = quick_rossler(6);
    let params = cfg.param_range.values();
    let perm = [3, 0, 5, 1, 4, 2];
    let shuffled: Vec<f64> = perm.iter().map(|&i| params[i]).collect();
    let a = run_sweep_on(&cfg, &params).unwrap();
    let b = run_sweep_on(&cfg, &shuffled).unwrap();
    let la = a.lambda_curve().unwrap();
    let lb = b.lambda_curve().unwrap();
    for (pos, &i) in perm.iter().enumerate() {
        for k in 0..a.crocker.len() {
            assert_eq!(a.crocker[k].columns[i], b.crocker[k].columns[pos]);
            assert_eq!(a.l1_curves[k][i], b.l1_curves[k][pos]);
        }
        assert_eq!(a.bifurcation[i], b.bifurcation[pos]);
        assert_eq!(la[i], lb[pos]);
    }
}

#[test]
fn l1_curves_are_column_sums() {
    let r = run_sweep(&quick_rossler(4)).unwrap();
    for (cm, curve) in r.crocker.iter().zip(&r.l1_curves) {
        for (col, l1) in cm.columns.iter().zip(curve) {
            assert_eq!(col.as_ref().map(|c| c.iter().map(|&v| u64::from(v)).sum()), *l1);
        }
    }
}

fn blowup_system() -> SystemSpec {
    // Bounded for k < 0, escapes past 1e6 for k > 0.
    SystemSpec::new("blowup", 3, &[("k", -1.0)], "k", |s, p, o| {
        o[0] = p[0] * s[0] + (3.0 * s[1]).sin();
        o[1] = s[2];
        o[2] = -s[1];
    })
    .unwrap()
}

fn blowup_config() -> SweepConfig {
    let mut cfg = quick_rossler(3);
    cfg.system = blowup_system();
    cfg.integration = IntegrationConfig::new(vec![1.0, 0.0, 1.0], 0.05, 2_000, 500);
    cfg.subsample_count = 50;
    cfg
}

#[test]
fn divergence_leaves_gaps_only_at_its_index() {
    let cfg = blowup_config();
    let r = run_sweep_on(&cfg, &[-1.0, -0.5, 1.0, -0.2]).unwrap();
    assert_eq!(r.gap_count(), 1);
    assert!(r.failures[2].is_some());
    let lam = r.lambda_curve().unwrap();
    for j in 0..4 {
        let gap = j == 2;
        for (cm, curve) in r.crocker.iter().zip(&r.l1_curves) {
            assert_eq!(cm.columns[j].is_none(), gap);
            assert_eq!(curve[j].is_none(), gap);
        }
        assert_eq!(r.bifurcation[j].is_none(), gap);
        assert_eq!(r.barcodes[j].is_none(), gap);
        assert_eq!(r.timings[j].is_none(), gap);
        assert_eq!(lam[j].is_none(), gap);
    }
}

#[test]
fn all_diverged_is_an_error() {
    let cfg = blowup_config();
    assert!(matches!(run_sweep_on(&cfg, &[1.0, 2.0]), Err(SweepError::AllFailed(_))));
}

#[test]
fn single_value_sweep() {
    let mut cfg = quick_rossler(1);
    cfg.param_range = ParamRange::new(0.4, 0.4, 1);
    let r = run_sweep(&cfg).unwrap();
    assert_eq!(r.param_values, vec![0.4]);
    for (cm, curve) in r.crocker.iter().zip(&r.l1_curves) {
        assert_eq!(cm.n_params(), 1);
        assert_eq!(cm.partition.len(), 100);
        assert_eq!(curve.len(), 1);
    }
    assert_eq!(r.lambda_curve().unwrap().len(), 1);
    assert!(r.correlations().iter().all(|(_, c)| c.is_err()));
}

#[test]
fn loopless_dimension_borrows_the_other_grid() {
    // Uniform motion along x: the samples lie on a segment, so no loops.
    let line = SystemSpec::new("line", 2, &[("w", 1.0)], "w", |s, p, o| {
        o[0] = p[0] * s[1];
        o[1] = 0.0;
    })
    .unwrap();
    let mut cfg = quick_rossler(2);
    cfg.system = line;
    cfg.integration = IntegrationConfig::new(vec![0.0, 1.0], 0.01, 600, 100);
    cfg.subsample_count = 40;
    cfg.compute_lyapunov = false;
    let r = run_sweep_on(&cfg, &[1.0, 2.0]).unwrap();
    let h0 = r.crocker_for(0).unwrap();
    let h1 = r.crocker_for(1).unwrap();
    assert_eq!(h1.partition, h0.partition);
    assert!(h1.columns.iter().flatten().flatten().all(|&c| c == 0));
}

#[test]
fn written_outputs_are_deterministic_and_parse() {
    let cfg = quick_rossler(4);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run_sweep(&cfg).unwrap();
    let files = write_sweep_dir(&ra, a.path()).unwrap();
    write_sweep_dir(&run_sweep(&cfg).unwrap(), b.path()).unwrap();
    for f in &files {
        let name = f.file_name().unwrap();
        if name == "timings.csv" {
            continue;
        }
        assert_eq!(
            std::fs::read(f).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name:?} differs"
        );
    }
    for cm in &ra.crocker {
        let text = std::fs::read_to_string(a.path().join(format!("crocker_dim{}.csv", cm.dimension))).unwrap();
        assert_eq!(&read_crocker_csv(&text, cm.dimension).unwrap(), cm);
    }
    let mut buf = Vec::new();
    let bars = ra.barcodes[0].as_ref().unwrap();
    write_barcodes_csv(&mut buf, bars).unwrap();
    assert_eq!(&read_barcodes_csv(std::str::from_utf8(&buf).unwrap()).unwrap(), bars);
}

#[test]
fn analysis_of_one_value_matches_the_sweep_column() {
    let cfg = quick_rossler(3);
    let r = run_sweep(&cfg).unwrap();
    let one = analyze_parameter(&cfg, r.param_values[1]).unwrap();
    assert_eq!(Some(&one.barcodes), r.barcodes[1].as_ref());
    assert_eq!(Some(&one.bifurcation), r.bifurcation[1].as_ref());
    let part = make_partition(r.crocker[0].partition.values()[99], 100).unwrap();
    assert_eq!(
        Some(&betti_vector(&one.barcodes[0], &part).counts),
        r.crocker[0].columns[1].as_ref()
    );
}
