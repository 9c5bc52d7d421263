//! Where the normal moment prior puts its mass on the partial-correlation
//! scale.

use pcbff::bff::tau2_from_omega;
use pcbff::densities::prior_mass_rho_interval;
use pcbff::pcstats::omega_from_rho;
use pcbff::{NormalMomentPrior, PartialCorr};

fn main() -> pcbff::Result<()> {
    let (n, p) = (40, 2);
    for nu in [1.0, 2.0, 5.0] {
        for mode in [0.2, 0.5, 0.8] {
            let omega = omega_from_rho(PartialCorr::new(mode)?)?;
            let prior = NormalMomentPrior::new(tau2_from_omega(omega, n, p, nu)?, nu)?;
            let inner = prior_mass_rho_interval(&prior, n, p, 0.2, 0.8)?
                + prior_mass_rho_interval(&prior, n, p, -0.8, -0.2)?;
            println!("nu = {nu}, mode |rho*| = {mode}: mass on +-(0.2, 0.8) = {inner:.4}");
        }
    }
    Ok(())
}
