//! Non-local priors on the non-centrality parameter and the sampling densities
//! of r* and t₁.
//!
//! The density of the sample partial correlation with `p − 1` conditioning
//! variables is the exact density of an ordinary sample correlation from
//! `n − p + 1` observations. Writing `df = n − p − 1`:
//!
//! ```text
//! f(r | ρ) = df Γ(df+1) / (√(2π) Γ(df+3/2))
//!            (1−ρ²)^((df+1)/2) (1−r²)^((df−2)/2) (1−ρr)^(−(df+1/2))
//!            ₂F₁(½, ½; df+3/2; (1+ρr)/2)
//! ```
//!
//! At ρ = 0 this reduces to the law of `r = t/√(t²+df)` with `t ~ T_df`, so
//! `f(t₁ | λ = 0)` is the central t density that defines the null marginal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pcstats::{r_from_t, rho_from_lambda, PartialCorr};
use crate::specfun::{
    ln_gamma_pos, ln_gauss_2f1_clamped, reg_lower_gamma, t_logpdf_unchecked, Hyp2f1Params,
};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest |ρ·r| accepted before the ₂F₁ kernel argument is considered to
/// sit on its boundary at 1.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Normal moment prior π_nm(λ | τ², ν) ∝ |λ|^{2ν} exp(−λ²/(2τ²)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalMomentPrior {
    tau2: f64,
    nu: f64,
}

impl NormalMomentPrior {
    pub fn new(tau2: f64, nu: f64) -> Result<Self> {
        if !(tau2 > 0.0 && tau2.is_finite()) {
            return Err(Error::domain("NormalMomentPrior", format!("tau2 = {tau2} must be > 0")));
        }
        if !(nu >= 1.0 && nu.is_finite()) {
            return Err(Error::domain("NormalMomentPrior", format!("nu = {nu} must be >= 1")));
        }
        Ok(Self { tau2, nu })
    }

    pub fn tau2(&self) -> f64 {
        self.tau2
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// |mode| = √(2ν)·τ.
    pub fn mode(&self) -> f64 {
        (2.0 * self.nu * self.tau2).sqrt()
    }

    /// λ² under this prior is Gamma(ν + ½, scale 2τ²).
    pub fn lambda_sq_shape(&self) -> f64 {
        self.nu + 0.5
    }

    pub fn lambda_sq_scale(&self) -> f64 {
        2.0 * self.tau2
    }

    /// P(|λ| ≤ m).
    fn abs_cdf(&self, m: f64) -> f64 {
        if m.is_infinite() {
            return 1.0;
        }
        reg_lower_gamma(self.lambda_sq_shape(), m * m / self.lambda_sq_scale())
            .expect("shape and argument validated by construction")
    }
}

/// ln π_nm(λ | τ², ν); −∞ at λ = 0.
pub fn nm_prior_logpdf(lambda: f64, prior: &NormalMomentPrior) -> f64 {
    if lambda == 0.0 {
        return f64::NEG_INFINITY;
    }
    let NormalMomentPrior { tau2, nu } = *prior;
    2.0 * nu * lambda.abs().ln()
        - (nu + 0.5) * (2.0 * tau2).ln()
        - ln_gamma_pos(nu + 0.5)
        - lambda * lambda / (2.0 * tau2)
}

/// Inverse moment prior with the normalizer as it is usually displayed:
///
/// `π_I(θ) = r τ^{ν/2} / Γ(ν/(2r)) · |θ−θ₀|^{−(ν+1)} · exp(−(|θ−θ₀|/τ)^{−r})`.
///
/// That expression integrates to [`imom_total_mass`], which is not 1 in
/// general; divide by it to obtain a probability density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseMomentPrior {
    pub theta0: f64,
    pub r_order: f64,
    pub nu: f64,
    pub tau: f64,
}

impl InverseMomentPrior {
    pub fn new(theta0: f64, r_order: f64, nu: f64, tau: f64) -> Result<Self> {
        if !(r_order > 0.0 && nu > 0.0 && tau > 0.0) || !theta0.is_finite() {
            return Err(Error::domain(
                "InverseMomentPrior",
                format!("need r, nu, tau > 0 (r = {r_order}, nu = {nu}, tau = {tau})"),
            ));
        }
        Ok(Self {
            theta0,
            r_order,
            nu,
            tau,
        })
    }
}

pub fn imom_prior_logpdf(theta: f64, prior: &InverseMomentPrior) -> f64 {
    let d = (theta - prior.theta0).abs();
    if d == 0.0 {
        return f64::NEG_INFINITY;
    }
    let InverseMomentPrior { r_order: r, nu, tau, .. } = *prior;
    r.ln() + 0.5 * nu * tau.ln() - ln_gamma_pos(nu / (2.0 * r)) - (nu + 1.0) * d.ln()
        - (d / tau).powf(-r)
}

/// ∫ π_I(θ) dθ = 2 τ^{−ν/2} Γ(ν/r) / Γ(ν/(2r)).
pub fn imom_total_mass(prior: &InverseMomentPrior) -> f64 {
    let InverseMomentPrior { r_order: r, nu, tau, .. } = *prior;
    (2f64.ln() - 0.5 * nu * tau.ln() + ln_gamma_pos(nu / r) - ln_gamma_pos(nu / (2.0 * r))).exp()
}

/// Conditional densities of r* and t₁ for fixed (n, p), with the
/// normalizing constant computed once.
#[derive(Debug, Clone, Copy)]
pub struct PartialCorrDensity {
    n: usize,
    p: usize,
    df: f64,
    log_const: f64,
}

impl PartialCorrDensity {
    /// Requires n − p − 1 ≥ 2.
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n < p + 3 {
            return Err(Error::domain(
                "PartialCorrDensity",
                format!("n - p - 1 must be >= 2 (n = {n}, p = {p})"),
            ));
        }
        let df = (n - p - 1) as f64;
        let log_const = df.ln() + ln_gamma_pos(df + 1.0) - ln_gamma_pos(df + 1.5) - LN_SQRT_2PI;
        Ok(Self { n, p, df, log_const })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    /// Kernel shared by the r and t parameterizations. Takes 1−ρ² and 1−r²
    /// separately so callers can pass them in cancellation-free form.
    fn kernel(&self, r: f64, rho: f64, one_m_rho2: f64, one_m_r2: f64) -> Result<f64> {
        let prod = rho * r;
        if prod.abs() > 1.0 - BOUNDARY_TOL {
            return Err(Error::Boundary { product: prod });
        }
        let df = self.df;
        let hyp = ln_gauss_2f1_clamped(&Hyp2f1Params::new(0.5, 0.5, df + 1.5, 0.5 * (1.0 + prod)))?;
        Ok(self.log_const + 0.5 * (df + 1.0) * one_m_rho2.ln() + 0.5 * (df - 2.0) * one_m_r2.ln()
            - (df + 0.5) * (-prod).ln_1p()
            + hyp)
    }

    /// ln f(r | ρ) from the general formula, without the ρ = 0 shortcut.
    pub fn ln_r_general(&self, r: f64, rho: f64) -> Result<f64> {
        check_open("r", r)?;
        check_open("rho", rho)?;
        self.kernel(r, rho, (1.0 - rho) * (1.0 + rho), (1.0 - r) * (1.0 + r))
    }

    /// ln f(r | ρ = 0): the central-t law of t = √df·r/√(1−r²) pushed to r.
    pub fn ln_r_null(&self, r: f64) -> Result<f64> {
        check_open("r", r)?;
        let one_m_r2 = (-r * r).ln_1p();
        let t = self.df.sqrt() * r / (1.0 - r * r).sqrt();
        Ok(t_logpdf_unchecked(t, self.df) + 0.5 * self.df.ln() - 1.5 * one_m_r2)
    }

    /// ln f(r* | ρ*).
    pub fn ln_r(&self, r: f64, rho: f64) -> Result<f64> {
        if rho == 0.0 {
            self.ln_r_null(r)
        } else {
            self.ln_r_general(r, rho)
        }
    }

    /// ln f(t₁ | λ) without the λ = 0 shortcut.
    pub fn ln_t_general(&self, t: f64, lambda: f64) -> Result<f64> {
        if !t.is_finite() || !lambda.is_finite() {
            return Err(Error::domain("t_cond_logdensity", format!("t = {t}, lambda = {lambda}")));
        }
        let df = self.df;
        let t2 = df + t * t;
        let l2 = df + lambda * lambda;
        let r = r_from_t(t, df);
        let rho = rho_from_lambda(lambda, df);
        // 1 − v(t)² = df/(df+t²), 1 − u(λ)² = df/(df+λ²)
        let ln_kernel = self.kernel(r, rho, df / l2, df / t2)?;
        Ok(ln_kernel + df.ln() - 1.5 * t2.ln())
    }

    /// ln f(t₁ | λ); at λ = 0 exactly the central t log density.
    pub fn ln_t(&self, t: f64, lambda: f64) -> Result<f64> {
        if lambda == 0.0 {
            if t.is_nan() {
                return Err(Error::domain("t_cond_logdensity", "t is NaN"));
            }
            Ok(t_logpdf_unchecked(t, self.df))
        } else {
            self.ln_t_general(t, lambda)
        }
    }
}

fn check_open(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("r_cond_logdensity", format!("|{name}| = {} must be < 1", v.abs())))
    }
}

/// ln f(r* | ρ*) for the sample partial correlation.
pub fn r_cond_logdensity(r: PartialCorr, rho: PartialCorr, n: usize, p: usize) -> Result<f64> {
    PartialCorrDensity::new(n, p)?.ln_r(r.value(), rho.value())
}

/// ln f(t₁ | λ).
pub fn t_cond_logdensity(t: f64, lambda: f64, n: usize, p: usize) -> Result<f64> {
    PartialCorrDensity::new(n, p)?.ln_t(t, lambda)
}

/// Prior mass that π_nm on λ places on ρ* ∈ [lo, hi] through ρ* = u(λ).
///
/// u is increasing, so the ρ*-interval maps to a λ-interval; the mass of each
/// signed branch follows from λ² ~ Gamma(ν + ½, 2τ²).
pub fn prior_mass_rho_interval(
    prior: &NormalMomentPrior,
    n: usize,
    p: usize,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    if !(-1.0..=1.0).contains(&lo) || !(-1.0..=1.0).contains(&hi) || !(lo < hi) {
        return Err(Error::domain(
            "prior_mass_rho_interval",
            format!("need -1 <= lo < hi <= 1, got [{lo}, {hi}]"),
        ));
    }
    if n < p + 2 {
        return Err(Error::Argument(format!("n - p - 1 must be >= 1 (n = {n}, p = {p})")));
    }
    let df = (n - p - 1) as f64;
    let to_lambda = |rho: f64| {
        if rho.abs() == 1.0 {
            rho * f64::INFINITY
        } else {
            df.sqrt() * rho / (1.0 - rho * rho).sqrt()
        }
    };
    let (a, b) = (to_lambda(lo), to_lambda(hi));
    // half of |λ| mass on each sign
    let mass = if a >= 0.0 {
        0.5 * (prior.abs_cdf(b) - prior.abs_cdf(a))
    } else if b <= 0.0 {
        0.5 * (prior.abs_cdf(-a) - prior.abs_cdf(-b))
    } else {
        0.5 * (prior.abs_cdf(-a) + prior.abs_cdf(b))
    };
    Ok(mass.clamp(0.0, 1.0))
}
