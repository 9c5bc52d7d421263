//! BFF analysis of the rapid-resumption study: t = -0.06 on 37 degrees of
//! freedom (n = 40, p = 2).

use pcbff::specfun::student_t_two_sided_p;
use pcbff::{bff_curve, default_rho_grid, stretched_beta_log_bf, PartialCorr, TestSummary};

fn main() -> pcbff::Result<()> {
    let summary = TestSummary::new(-0.06, 40, 2)?;
    let p = student_t_two_sided_p(summary.t1, summary.df() as f64)?;
    println!("r* = {:.5}, p-value = {p:.4}", summary.r());

    let curve = bff_curve(&summary, &default_rho_grid(), 1.0)?;
    for level in [-2.0, -3.0] {
        if let Some(rho) = curve.first_positive_crossing(level) {
            println!("log BF10 < {level} for |rho*| > {rho:.3}");
        }
    }
    for pt in curve.points.iter().filter(|pt| pt.rho_mode >= 0.0).step_by(10) {
        println!("rho* = {:5.2}  omega = {:6.3}  log BF10 = {:8.4}", pt.rho_mode, pt.omega, pt.log_bf10);
    }

    let sb = stretched_beta_log_bf(PartialCorr::new(summary.r())?, 40, 1, 0.5)?;
    println!("stretched-beta(0.5) log BF10 = {sb:.4}");
    Ok(())
}
