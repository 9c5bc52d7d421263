//! Alternative operating characteristics: a fixed rho = 0.5, then a sweep of
//! generating effect sizes comparing the BFF and the stretched-beta Bayes
//! factor with the true Bayes factor.

use pcbff::simulate::{run_alt_oc, OcMode, SimScenario};

fn main() -> pcbff::Result<()> {
    let replicates = std::env::args().nth(1).map_or(100, |s| s.parse().expect("replicates"));
    let point = SimScenario {
        mode: OcMode::Point,
        rho_true: 0.5,
        replicates,
        bins: 500,
        ..SimScenario::default()
    };
    for s in run_alt_oc(&point)?.summaries() {
        println!("{}", s.line());
    }

    let sweep = SimScenario {
        mode: OcMode::Sweep,
        sample_sizes: vec![50],
        sweep_omegas: vec![0.2, 0.4, 0.6, 0.8],
        ..point
    };
    for s in run_alt_oc(&sweep)?.summaries() {
        println!(
            "omega = {:.1}: |BFF - true| = {:.3}, |stretched beta - true| = {:.3}",
            s.omega_true, s.mean_abs_dev_bff, s.mean_abs_dev_stretched_beta
        );
    }
    Ok(())
}
