mod common;

use common::{residual_corr, Mix};
use nalgebra::DMatrix;
use pcbff::pcstats::*;

fn random_dataset(rng: &mut Mix, n: usize, p: usize) -> (Vec<f64>, DMatrix<f64>) {
    let mut x = DMatrix::<f64>::zeros(n, p);
    for i in 0..n {
        let shared = rng.normal();
        for j in 0..p {
            x[(i, j)] = 0.5 * shared + rng.normal() + j as f64;
        }
    }
    let coefs: Vec<f64> = (0..p).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let y = (0..n)
        .map(|i| 2.0 + (0..p).map(|j| coefs[j] * x[(i, j)]).sum::<f64>() + 1.5 * rng.normal())
        .collect();
    (y, x)
}

fn oracle(y: &[f64], x: &DMatrix<f64>, target: usize) -> f64 {
    let col = |j: usize| x.column(j).iter().copied().collect::<Vec<_>>();
    let cond: Vec<Vec<f64>> = (0..x.ncols()).filter(|&j| j != target).map(col).collect();
    residual_corr(y, &col(target), &cond)
}

#[test]
fn mle_matches_residual_correlation() {
    let mut rng = Mix(101);
    for k in 0..60 {
        let n = 12 + (rng.next_u64() % 150) as usize;
        let p = 1 + (rng.next_u64() % 6) as usize;
        let target = (rng.next_u64() % p as u64) as usize;
        let (y, x) = random_dataset(&mut rng, n, p);
        let want = oracle(&y, &x, target);
        let d = DataMatrix::new(y, x, target).unwrap();
        let r = partial_corr_mle(&sufficient_stats(&d).unwrap()).unwrap().value();
        assert!((r - want).abs() < 1e-10, "dataset {k}: {r} vs {want}");
    }
}

#[test]
fn invariant_to_affine_rescaling_and_column_order() {
    let mut rng = Mix(7);
    let (y, x) = random_dataset(&mut rng, 50, 3);
    let base = partial_corr_mle(&sufficient_stats(&DataMatrix::new(y.clone(), x.clone(), 1).unwrap()).unwrap())
        .unwrap()
        .value();

    let y2: Vec<f64> = y.iter().map(|v| 3.0 * v - 7.0).collect();
    let mut x2 = x.clone();
    x2.column_mut(0).scale_mut(-0.01);
    x2.column_mut(1).add_scalar_mut(100.0);
    let r2 = partial_corr_mle(&sufficient_stats(&DataMatrix::new(y2, x2, 1).unwrap()).unwrap())
        .unwrap()
        .value();
    assert!((r2 - base).abs() < 1e-10);

    let mut x3 = x.clone();
    x3.swap_columns(0, 2);
    let r3 = partial_corr_mle(&sufficient_stats(&DataMatrix::new(y, x3, 1).unwrap()).unwrap())
        .unwrap()
        .value();
    assert!((r3 - base).abs() < 1e-12);
}

#[test]
fn negating_the_target_flips_the_sign() {
    let mut rng = Mix(3);
    let (y, x) = random_dataset(&mut rng, 30, 2);
    let r = partial_corr_mle(&sufficient_stats(&DataMatrix::new(y.clone(), x.clone(), 0).unwrap()).unwrap())
        .unwrap()
        .value();
    let mut xn = x;
    xn.column_mut(0).scale_mut(-1.0);
    let rn = partial_corr_mle(&sufficient_stats(&DataMatrix::new(y, xn, 0).unwrap()).unwrap())
        .unwrap()
        .value();
    assert!((r + rn).abs() < 1e-12);
}

#[test]
fn t_statistic_round_trips_through_r() {
    for &(r, n, p) in &[(0.3, 40, 2), (-0.9, 12, 5), (0.0, 10, 1)] {
        let s = t_statistic(PartialCorr::new(r).unwrap(), n, p).unwrap();
        assert!((s.r() - r).abs() < 1e-14);
        assert_eq!(s.df(), n - p - 1);
    }
}

#[test]
fn collinear_design_is_rejected_with_column_names() {
    let mut rng = Mix(1);
    let n = 20;
    let a: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
    let b: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
    let mut x = DMatrix::<f64>::zeros(n, 3);
    for i in 0..n {
        x[(i, 0)] = a[i];
        x[(i, 1)] = b[i];
        x[(i, 2)] = a[i] - 2.0 * b[i];
    }
    let y: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
    let d = DataMatrix::with_names(y, x, 0, vec!["a".into(), "b".into(), "c".into()]).unwrap();
    match sufficient_stats(&d) {
        Err(pcbff::Error::Singular { columns, .. }) => assert!(!columns.is_empty()),
        other => panic!("expected rank error, got {other:?}"),
    }
}

#[test]
fn csv_reader_selects_columns() {
    let text = "y,x1,x2,x3\n1,2,3,1\n2,1,5,0\n3,4,4,2\n4,3,8,1\n5,6,7,3\n6,5,9,1\n";
    let d = DataMatrix::from_csv(text.as_bytes(), "y", "x2", Some(&["x1".to_string()])).unwrap();
    assert_eq!(d.p(), 2);
    assert_eq!(d.names(), &["x2".to_string(), "x1".to_string()]);
    let all = DataMatrix::from_csv(text.as_bytes(), "y", "x2", None).unwrap();
    assert_eq!(all.p(), 3);
    assert!(DataMatrix::from_csv(text.as_bytes(), "y", "nope", None).is_err());
    assert!(DataMatrix::from_csv("y,x\n1,a\n".as_bytes(), "y", "x", None).is_err());
}
