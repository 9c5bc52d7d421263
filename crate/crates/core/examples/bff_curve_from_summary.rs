//! BFF curve as CSV on stdout.
//!
//! cargo run --example bff_curve_from_summary -- <t> <n> <p> [nu]

use pcbff::{bff_curve, default_rho_grid, TestSummary};

fn main() -> pcbff::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let t: f64 = arg(0, "2.1").parse().expect("t");
    let n: usize = arg(1, "60").parse().expect("n");
    let p: usize = arg(2, "3").parse().expect("p");
    let nu: f64 = arg(3, "1").parse().expect("nu");

    let curve = bff_curve(&TestSummary::new(t, n, p)?, &default_rho_grid(), nu)?;
    curve.write_csv(std::io::stdout().lock())?;
    let (w, v) = pcbff::max_bff(&curve, 0.0)?;
    eprintln!("max log BF10 = {v:.4} at omega = {w:.4}");
    Ok(())
}
