//! Operating characteristics under H0: mean log BFF per grid point and
//! sample size.
//!
//! cargo run --release --example null_operating_characteristics -- [replicates]

use pcbff::simulate::{run_null_oc, SimScenario};

fn main() -> pcbff::Result<()> {
    let replicates = std::env::args().nth(1).map_or(200, |s| s.parse().expect("replicates"));
    let scn = SimScenario {
        replicates,
        bins: 500,
        ..SimScenario::default()
    };
    let res = run_null_oc(&scn)?;
    for cell in &res.cells {
        println!("n = {}", cell.n);
        for a in cell.aggregates.iter().step_by(4) {
            println!(
                "  omega* = {:.2}  mean log BFF = {:8.4} (se {:.4})  mean true log BF = {:8.4}",
                a.omega_star, a.mean_log_bff, a.se_log_bff, a.mean_true_log_bf
            );
        }
        println!("  {}", cell.summary().line());
    }
    Ok(())
}
