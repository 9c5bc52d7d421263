mod common;

use common::Mix;
use nalgebra::DMatrix;
use pcbff::simulate::*;

fn tiny(mode: OcMode) -> SimScenario {
    SimScenario {
        mode,
        sample_sizes: vec![15, 30],
        rho_true: if mode == OcMode::Point { 0.5 } else { 0.0 },
        sweep_omegas: if mode == OcMode::Sweep { vec![0.3, 0.7] } else { vec![] },
        replicates: 24,
        bins: 100,
        omega_grid: vec![0.0, 0.1, 0.3, 0.5, 0.7, 0.9],
        ..SimScenario::default()
    }
}

#[test]
fn identity_sigma_gives_small_sample_correlations() {
    let sigma = DMatrix::<f64>::identity(3, 3);
    let d = sample_mvn(&sigma, 100_000, &mut replicate_rng(3, 0)).unwrap();
    let n = d.n() as f64;
    let cols = [d.y().iter().copied().collect::<Vec<_>>(), d.x().column(0).iter().copied().collect(), d.x().column(1).iter().copied().collect()];
    for c in &cols {
        let mean = c.iter().sum::<f64>() / n;
        assert!(mean.abs() < 4.0 / n.sqrt());
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let r = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum::<f64>() / n;
            assert!(r.abs() < 0.02);
        }
    }
}

#[test]
fn sample_covariance_matches_sigma() {
    let s3 = build_sigma_with_partial(0.5, 0.3).unwrap();
    let sigma = DMatrix::from_iterator(3, 3, s3.iter().copied());
    let d = sample_mvn(&sigma, 200_000, &mut replicate_rng(11, 4)).unwrap();
    let n = d.n() as f64;
    let yx: f64 = d.y().iter().zip(d.x().column(0).iter()).map(|(a, b)| a * b).sum::<f64>() / n;
    assert!((yx - 0.545).abs() < 0.01);
}

#[test]
fn random_feasible_sigmas_round_trip() {
    let mut rng = Mix(21);
    for _ in 0..200 {
        let rho = rng.uniform(-0.95, 0.95);
        let c = rng.uniform(-0.9, 0.9);
        let s = build_sigma_with_partial(rho, c).unwrap();
        assert!((population_partial(&s) - rho).abs() < 1e-12);
    }
}

#[test]
fn results_are_deterministic_and_thread_independent() {
    let scn = tiny(OcMode::Point);
    let a = run_alt_oc(&scn).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let b = pool.install(|| run_alt_oc(&scn).unwrap());
    let c = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_alt_oc(&scn).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
    let mut x = Vec::new();
    let mut y = Vec::new();
    a.write_records_csv(&mut x).unwrap();
    c.write_records_csv(&mut y).unwrap();
    assert_eq!(x, y);
}

#[test]
fn records_and_aggregates_are_consistent() {
    for mode in [OcMode::Null, OcMode::Point, OcMode::Sweep] {
        let scn = tiny(mode);
        let res = run_oc(&scn).unwrap();
        let expected_cells = scn.sample_sizes.len() * scn.sweep_omegas.len().max(1);
        assert_eq!(res.cells.len(), expected_cells);
        for cell in &res.cells {
            assert_eq!(cell.records.len(), scn.replicates);
            assert_eq!(aggregate(&cell.omega_grid, &cell.records), cell.aggregates);
            assert_eq!(cell.aggregates[0].mean_log_bff, 0.0);
            for rec in &cell.records {
                assert!(rec.omega_at_max >= cell.max_restriction && rec.omega_at_max > 0.0);
            }
        }
    }
}

#[test]
fn records_csv_round_trips_summaries() {
    let res = run_oc(&tiny(OcMode::Sweep)).unwrap();
    let mut buf = Vec::new();
    res.write_records_csv(&mut buf).unwrap();
    let back = summaries_from_records_csv(buf.as_slice()).unwrap();
    assert_eq!(back, res.summaries());
    let mut agg = Vec::new();
    res.write_aggregates_csv(&mut agg).unwrap();
    let text = String::from_utf8(agg).unwrap();
    assert_eq!(text.lines().next().unwrap(), AGGREGATE_COLUMNS.join(","));
    assert_eq!(text.lines().count(), 1 + res.cells.len() * 6);
}

#[test]
fn invalid_scenarios_are_rejected() {
    let mut s = tiny(OcMode::Null);
    s.rho_true = 0.2;
    assert!(run_null_oc(&s).is_err());
    let mut s = tiny(OcMode::Point);
    s.rho_true = 0.0;
    assert!(run_alt_oc(&s).is_err());
    let mut s = tiny(OcMode::Null);
    s.omega_grid = vec![0.3, 0.1];
    assert!(run_null_oc(&s).is_err());
    let mut s = tiny(OcMode::Point);
    s.nuisance_corr = 1.0;
    assert!(matches!(run_alt_oc(&s), Err(pcbff::Error::Infeasible { .. })));
}
