mod common;

use common::{nm_prior_pdf, noncentral_t_pdf, tanh_sinh, central_t_logpdf};
use pcbff::bff::*;
use pcbff::densities::PartialCorrDensity;
use pcbff::pcstats::{EffectSize, TestSummary};

/// ln BF₁₀ by adaptive quadrature over λ, independent of the quantile rule.
fn oracle_log_bf(t: f64, n: usize, p: usize, omega: f64, nu: f64) -> f64 {
    let d = PartialCorrDensity::new(n, p).unwrap();
    let tau2 = tau2_from_omega(EffectSize::new(omega).unwrap(), n, p, nu).unwrap();
    let l0 = d.ln_t(t, 0.0).unwrap();
    let hi = (2.0 * tau2).sqrt() * (8.0 + nu.sqrt() * 3.0) + t.abs() * 2.0;
    let f = |l: f64| (d.ln_t(t, l).unwrap() - l0).exp() * nm_prior_pdf(l, tau2, nu);
    let m = tanh_sinh(f, 0.0, hi, 1e-12) + tanh_sinh(f, -hi, 0.0, 1e-12);
    m.ln()
}

#[test]
fn quantile_rule_matches_direct_quadrature() {
    for &(t, n, p) in &[(-0.06, 40, 2), (2.2, 30, 3), (-4.0, 100, 1), (0.8, 12, 4)] {
        let s = TestSummary::new(t, n, p).unwrap();
        for omega in [0.05, 0.2, 0.5, 1.0, 2.0] {
            let rho = omega / (1.0f64 + omega * omega).sqrt();
            let got = log_bf10(&s, rho, 1.0).unwrap();
            let want = oracle_log_bf(t, n, p, omega, 1.0);
            assert!((got - want).abs() < 2e-3 * want.abs().max(1.0), "t={t} n={n} w={omega}: {got} vs {want}");
        }
    }
}

#[test]
fn higher_nu_matches_direct_quadrature() {
    let s = TestSummary::new(1.7, 50, 2).unwrap();
    for nu in [2.0, 4.5] {
        let got = log_bf10(&s, 0.3, nu).unwrap();
        let want = oracle_log_bf(1.7, 50, 2, 0.3 / (1.0f64 - 0.09).sqrt(), nu);
        assert!((got - want).abs() < 1e-3, "nu={nu}: {got} vs {want}");
    }
}

#[test]
fn self_convergence_in_bins() {
    let s = TestSummary::new(1.3, 45, 3).unwrap();
    let at = |b: usize| log_bf10_with(&s, 0.4, 1.0, QuadratureConfig::new(b, Branch::Symmetric).unwrap()).unwrap();
    let (a, b, c) = (at(1_000), at(10_000), at(100_000));
    assert!((b - c).abs() < (a - c).abs() || (a - c).abs() < 1e-10);
    assert!((b - c).abs() < 1e-4);
}

#[test]
fn curve_is_symmetric_and_zero_at_origin() {
    let s = TestSummary::new(-0.06, 40, 2).unwrap();
    let curve = bff_curve(&s, &default_rho_grid(), 1.0).unwrap();
    assert_eq!(curve.points.len(), 199);
    let mid = curve.points.iter().find(|pt| pt.rho_mode == 0.0).unwrap();
    assert_eq!(mid.log_bf10, 0.0);
    for (a, b) in curve.points.iter().zip(curve.points.iter().rev()) {
        assert!((a.log_bf10 - b.log_bf10).abs() < 1e-12);
    }
}

#[test]
fn one_sided_closed_forms_average_to_two_sided() {
    let (t, df, tau2) = (1.2, 40.0, 3.0);
    let two = closed_form_t_bf(t, df, tau2, 1.0).unwrap();
    let pos = closed_form_t_bf_sided(t, df, tau2, 1.0, Sidedness::Positive).unwrap();
    let neg = closed_form_t_bf_sided(t, df, tau2, 1.0, Sidedness::Negative).unwrap();
    assert!(((pos + neg) / 2.0 - two).abs() < 1e-12 * two);
    assert!(pos > two && neg < two);
}

#[test]
fn closed_form_matches_noncentral_t_oracle() {
    for &(t, mu, tau2) in &[(3.0, 20.0, 2.0), (-1.0, 5.0, 0.5), (0.4, 60.0, 8.0)] {
        let null = central_t_logpdf(t, mu).exp();
        let hi = (2.0 * tau2 as f64).sqrt() * 11.0;
        let f = |l: f64| noncentral_t_pdf(t, mu, l) * nm_prior_pdf(l, tau2, 1.0);
        let m = tanh_sinh(f, -hi, 0.0, 1e-11) + tanh_sinh(f, 0.0, hi, 1e-11);
        let got = closed_form_t_bf(t, mu, tau2, 1.0).unwrap();
        assert!((got / (m / null) - 1.0).abs() < 1e-4, "({t},{mu},{tau2}): {got} vs {}", m / null);
    }
}

#[test]
fn max_bff_respects_lower_bound() {
    let s = TestSummary::new(2.5, 60, 2).unwrap();
    let curve = bff_curve(&s, &rho_grid(0.0, 0.9, 91), 1.0).unwrap();
    let (w_all, v_all) = max_bff(&curve, 0.0).unwrap();
    let (w_hi, v_hi) = max_bff(&curve, 0.8).unwrap();
    assert!(v_all >= v_hi);
    assert!(w_hi >= 0.8);
    assert!(w_all > 0.0);
}

#[test]
fn curve_outputs() {
    let s = TestSummary::new(0.5, 20, 1).unwrap();
    let curve = bff_curve(&s, &[-0.5, 0.0, 0.5], 1.0).unwrap();
    let mut buf = Vec::new();
    curve.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("rho_mode,omega,tau2,log_bf10\n"));
    assert_eq!(text.lines().count(), 4);
    let json: serde_json::Value = serde_json::from_str(&curve.to_json().unwrap()).unwrap();
    assert_eq!(json["df"], 18);
    assert_eq!(json["points"].as_array().unwrap().len(), 3);
    assert!(bff_curve(&s, &[0.5, 0.0], 1.0).is_err());
    assert!(bff_curve(&s, &[0.0, 1.0], 1.0).is_err());
}

#[test]
fn refinement_resolves_wide_priors() {
    // rho = 0.99: prior scale ~43 against a likelihood of width ~1
    let omega = 0.99 / (1.0f64 - 0.99 * 0.99).sqrt();
    let s = TestSummary::new(-0.06, 40, 2).unwrap();
    let want = oracle_log_bf(-0.06, 40, 2, omega, 1.0);
    let cfg = QuadratureConfig::new(10_000, Branch::Symmetric).unwrap();
    let refined = log_bf10_with(&s, 0.99, 1.0, cfg).unwrap();
    let plain = log_bf10_with(&s, 0.99, 1.0, cfg.plain()).unwrap();
    assert!((refined - want).abs() < 1e-6, "{refined} vs {want}");
    assert!((plain - want).abs() > 1e-2);
    // |t| far beyond the prior: the mass sits past the last bin edge
    let far = TestSummary::new(-15.0, 100, 2).unwrap();
    let rho = 0.1 / (1.0f64 + 0.01).sqrt();
    let got = log_bf10_with(&far, rho, 1.0, cfg).unwrap();
    let want = oracle_log_bf(-15.0, 100, 2, 0.1, 1.0);
    assert!((got - want).abs() < 1e-6 * want.abs(), "{got} vs {want}");
    // moderate prior: both rules are already close
    let a = log_bf10_with(&s, 0.3, 1.0, cfg).unwrap();
    let b = log_bf10_with(&s, 0.3, 1.0, cfg.plain()).unwrap();
    let want = oracle_log_bf(-0.06, 40, 2, 0.3 / (1.0f64 - 0.09).sqrt(), 1.0);
    assert!((a - b).abs() < 1e-4, "{a} vs {b}");
    assert!((a - want).abs() <= (b - want).abs() + 1e-9, "{a} {b} {want}");
}
