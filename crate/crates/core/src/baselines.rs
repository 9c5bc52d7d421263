//! Competing Bayes factors for partial correlations: the closed-form
//! stretched-beta Bayes factor and a Monte Carlo JZS (mixture-of-g-prior)
//! regression Bayes factor.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pcstats::PartialCorr;
use crate::specfun::{ln_beta_pos, ln_gauss_2f1, Hyp2f1Params};

/// ln BF₁₀ under a stretched-beta(α, α) prior on the partial correlation,
/// for `n` observations and `k` conditioning variables.
///
/// `ln B(½, α + (n−k−1)/2) − ln B(½, α) + ln ₂F₁((n−k−1)/2, (n−k−1)/2; α + (n−k)/2; r²)`
pub fn stretched_beta_log_bf(r: PartialCorr, n: usize, k: usize, alpha: f64) -> Result<f64> {
    let rv = r.value();
    if !r.is_interior() {
        return Err(Error::domain("stretched_beta_log_bf", "|r| must be < 1"));
    }
    if n < k + 2 {
        return Err(Error::domain(
            "stretched_beta_log_bf",
            format!("n - k - 1 must be >= 1 (n = {n}, k = {k})"),
        ));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain("stretched_beta_log_bf", format!("alpha = {alpha} must be > 0")));
    }
    let m = (n - k - 1) as f64;
    let hyp = ln_gauss_2f1(&Hyp2f1Params::new(0.5 * m, 0.5 * m, alpha + 0.5 * (m + 1.0), rv * rv))?;
    Ok(ln_beta_pos(0.5, alpha + 0.5 * m) - ln_beta_pos(0.5, alpha) + hyp)
}

/// Inputs for [`jzs_log_bf`]: the coefficients of determination of a null
/// (p₀ predictors) and a full (p₁ predictors) regression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JzsInput {
    pub r2_null: f64,
    pub r2_full: f64,
    pub n: usize,
    pub p0: usize,
    pub p1: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

pub const JZS_MIN_SAMPLES: usize = 1_000;

impl JzsInput {
    fn validate(&self) -> Result<()> {
        let ok_r2 = |v: f64| (0.0..1.0).contains(&v);
        if !ok_r2(self.r2_null) || !ok_r2(self.r2_full) {
            return Err(Error::domain("jzs_log_bf", "R² values must lie in [0, 1)"));
        }
        if self.p1 < self.p0 {
            return Err(Error::domain("jzs_log_bf", "p1 must be >= p0"));
        }
        if self.r2_full < self.r2_null {
            return Err(Error::domain("jzs_log_bf", "r2_full must be >= r2_null"));
        }
        if self.n <= self.p1 + 1 {
            return Err(Error::domain("jzs_log_bf", "n must exceed p1 + 1"));
        }
        if self.mc_samples < JZS_MIN_SAMPLES {
            return Err(Error::domain(
                "jzs_log_bf",
                format!("mc_samples must be >= {JZS_MIN_SAMPLES}"),
            ));
        }
        Ok(())
    }
}

/// (1+g)^{−(n−1−p)/2} (1+(1−R²)g)^{−(n−1)/2}, in log form.
pub fn jzs_log_integrand(g: f64, r2: f64, p: usize, n: usize) -> f64 {
    let nm1 = (n - 1) as f64;
    -0.5 * (nm1 - p as f64) * g.ln_1p() - 0.5 * nm1 * ((1.0 - r2) * g).ln_1p()
}

/// Draws g ~ Gamma(shape ½, scale n/2); draw `i` uses ChaCha stream `i`, so
/// each draw is a pure function of (seed, i).
fn g_draws(seed: u64, n: usize, count: usize) -> Vec<f64> {
    let dist = Gamma::new(0.5, 0.5 * n as f64).expect("valid gamma parameters");
    let base = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let mut rng = base.clone();
            rng.set_stream(i as u64);
            dist.sample(&mut rng)
        })
        .collect()
}

fn log_mean_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + (x - max).exp(), c + 1));
    max + (sum / count as f64).ln()
}

/// Monte Carlo JZS Bayes factor of the full against the null regression:
/// ratio of sample means of the integrand over shared g draws.
pub fn jzs_log_bf(input: &JzsInput) -> Result<f64> {
    input.validate()?;
    let JzsInput {
        r2_null,
        r2_full,
        n,
        p0,
        p1,
        ..
    } = *input;
    let g = g_draws(input.seed, n, input.mc_samples);
    let num = log_mean_exp(g.iter().map(|&g| jzs_log_integrand(g, r2_full, p1, n)));
    let den = log_mean_exp(g.iter().map(|&g| jzs_log_integrand(g, r2_null, p0, n)));
    Ok(num - den)
}

/// Monte Carlo standard error of [`jzs_log_bf`] by the delta method.
pub fn jzs_log_bf_std_error(input: &JzsInput) -> Result<f64> {
    input.validate()?;
    let g = g_draws(input.seed, input.n, input.mc_samples);
    let m = g.len() as f64;
    let num: Vec<f64> = g
        .iter()
        .map(|&g| jzs_log_integrand(g, input.r2_full, input.p1, input.n).exp())
        .collect();
    let den: Vec<f64> = g
        .iter()
        .map(|&g| jzs_log_integrand(g, input.r2_null, input.p0, input.n).exp())
        .collect();
    let (mn, md) = (num.iter().sum::<f64>() / m, den.iter().sum::<f64>() / m);
    let (mut vn, mut vd, mut cov) = (0.0, 0.0, 0.0);
    for (a, b) in num.iter().zip(&den) {
        vn += (a - mn) * (a - mn);
        vd += (b - md) * (b - md);
        cov += (a - mn) * (b - md);
    }
    let (vn, vd, cov) = (vn / (m - 1.0), vd / (m - 1.0), cov / (m - 1.0));
    let var = vn / (mn * mn) + vd / (md * md) - 2.0 * cov / (mn * md);
    Ok((var.max(0.0) / m).sqrt())
}
