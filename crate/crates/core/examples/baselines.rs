//! Competing Bayes factors: stretched-beta on r* and Monte Carlo JZS on R².

use pcbff::baselines::{jzs_log_bf_std_error, JzsInput};
use pcbff::{jzs_log_bf, stretched_beta_log_bf, PartialCorr};

fn main() -> pcbff::Result<()> {
    for r in [0.0, 0.1, 0.3, 0.5] {
        let v = stretched_beta_log_bf(PartialCorr::new(r)?, 40, 1, 0.5)?;
        println!("stretched beta: r = {r:.1}, n = 40, k = 1 -> log BF10 = {v:.4}");
    }

    let input = JzsInput {
        r2_null: 0.20,
        r2_full: 0.30,
        n: 40,
        p0: 1,
        p1: 2,
        mc_samples: 100_000,
        seed: 42,
    };
    println!(
        "jzs: log BF10 = {:.4} (mc se {:.4})",
        jzs_log_bf(&input)?,
        jzs_log_bf_std_error(&input)?
    );
    Ok(())
}
