//! The special functions behind the densities.

use pcbff::specfun::{
    gamma_quantile, gauss_2f1, log_beta, log_gamma, reg_inc_beta, student_t_cdf, student_t_logpdf,
    Hyp2f1Params,
};

fn main() -> pcbff::Result<()> {
    println!("ln Gamma(0.5) = {} (ln sqrt(pi) = {})", log_gamma(0.5)?, std::f64::consts::PI.sqrt().ln());
    println!("ln B(2, 3) = {} (ln 1/12 = {})", log_beta(2.0, 3.0)?, (1.0f64 / 12.0).ln());

    let x = 0.3;
    let f = gauss_2f1(&Hyp2f1Params::new(0.5, 0.5, 1.5, x * x))?;
    println!("2F1(1/2,1/2;3/2;x^2)*x = {} (asin x = {})", f * x, x.asin());
    let f = gauss_2f1(&Hyp2f1Params::new(1.0, 1.0, 2.0, -x))?;
    println!("2F1(1,1;2;-x)*x = {} (ln(1+x) = {})", f * x, x.ln_1p());

    println!("t(5) log pdf at 1 = {}", student_t_logpdf(1.0, 5.0)?);
    println!("t(37) cdf at -0.06 = {}", student_t_cdf(-0.06, 37.0)?);
    println!("I_0.4(2, 3) = {}", reg_inc_beta(2.0, 3.0, 0.4)?);
    println!("Gamma(1.5, 2) median = {}", gamma_quantile(0.5, 1.5, 2.0)?);
    Ok(())
}
