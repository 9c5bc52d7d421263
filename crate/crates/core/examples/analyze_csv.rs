//! From raw data to a BFF: simulate (y, x1, x2) with partial correlation 0.4,
//! write it as CSV, read it back and analyze the x1 coefficient.

use std::io::Write;

use nalgebra::DMatrix;
use pcbff::pcstats::fisher_z;
use pcbff::simulate::{build_sigma_with_partial, replicate_rng, sample_mvn};
use pcbff::{bff_curve, default_rho_grid, partial_corr_mle, sufficient_stats, t_statistic, DataMatrix};

fn main() -> pcbff::Result<()> {
    let sigma = build_sigma_with_partial(0.4, 0.3)?;
    let sigma = DMatrix::from_iterator(3, 3, sigma.iter().copied());
    let data = sample_mvn(&sigma, 80, &mut replicate_rng(7, 0))?;

    let path = std::env::temp_dir().join("pcbff_analyze_example.csv");
    let mut f = std::fs::File::create(&path)?;
    writeln!(f, "y,x1,x2")?;
    for i in 0..data.n() {
        writeln!(f, "{},{},{}", data.y()[i], data.x()[(i, 0)], data.x()[(i, 1)])?;
    }
    drop(f);

    let d = DataMatrix::from_csv(std::fs::File::open(&path)?, "y", "x1", None)?;
    let stats = sufficient_stats(&d)?;
    let r = partial_corr_mle(&stats)?;
    let summary = t_statistic(r, d.n(), d.p())?;
    println!("n = {}, p = {}, r* = {:.4}, t = {:.4}, z = {:.4}", d.n(), d.p(), r.value(), summary.t1, fisher_z(r)?);
    println!("beta_hat = {:?}", stats.beta_hat);

    let curve = bff_curve(&summary, &default_rho_grid(), 1.0)?;
    let (w, v) = pcbff::max_bff(&curve, 0.0)?;
    println!("max log BF10 = {v:.3} at omega = {w:.3}");
    std::fs::remove_file(path)?;
    Ok(())
}
