//! Bayes factors based on the test statistic t₁ under a normal moment prior
//! on the non-centrality parameter, and Bayes factor function (BFF) curves.
//!
//! The prior scale is tied to a standardized effect size by placing the
//! prior mode at the corresponding non-centrality: √(2ν)·τ = √(n−p−1)·ω.
//!
//! The marginal m₁(t₁) = ∫ f(t₁|λ) π_nm(λ) dλ is evaluated with a
//! midpoint-quantile rule. Under π_nm, λ² ~ Gamma(ν+½, scale 2τ²), so with
//! `q_i = (i − ½)/B` and `λ_i = √F⁻¹(q_i)`,
//!
//! ```text
//! m₁ ≈ (1/B) Σ_i ½ [f(t₁ | λ_i) + f(t₁ | −λ_i)]
//! ```
//!
//! [`Branch::Positive`] drops the reflected term and integrates over λ > 0
//! only.
//!
//! When the prior is much wider than the likelihood (large ω with t near 0),
//! or much narrower (large |t| with small ω), nearly all of the mass falls in
//! a handful of extreme bins and the plain rule stalls. With `refine` on, a
//! bin whose log integrand differs from a neighbour's by more than
//! [`REFINE_JUMP`] is integrated adaptively in x = λ²/(2τ²) between its
//! quantile edges. Bins on smooth stretches keep their single node.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::densities::{NormalMomentPrior, PartialCorrDensity};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::pcstats::{omega_from_rho, EffectSize, PartialCorr, TestSummary};
use crate::specfun::{gamma_quantile, ln_gamma_pos, ln_gauss_2f1, t_logpdf_unchecked, Hyp2f1Params};

pub const DEFAULT_BINS: usize = 10_000;
pub const DEFAULT_NU: f64 = 1.0;
pub const DEFAULT_GRID_POINTS: usize = 199;
pub const DEFAULT_GRID_LIMIT: f64 = 0.99;
/// Neighbouring-node jump in ln integrand that triggers bin refinement.
pub const REFINE_JUMP: f64 = 0.05;
const REFINE_REL_TOL: f64 = 1e-10;
/// Bins below exp(-36) of the total are left alone.
const REFINE_NEGLIGIBLE: f64 = -36.0;

/// Which signs of λ the quadrature visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Average over ±λ_i (integral over the whole real line).
    #[default]
    Symmetric,
    /// λ_i > 0 only.
    Positive,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Symmetric => "symmetric",
            Branch::Positive => "positive",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Branch::Symmetric),
            "positive" => Ok(Branch::Positive),
            other => Err(Error::Argument(format!("unknown branch '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub bins: usize,
    pub branch: Branch,
    /// Adaptive refinement of under-resolved bins.
    #[serde(default = "default_refine")]
    pub refine: bool,
}

fn default_refine() -> bool {
    true
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            bins: DEFAULT_BINS,
            branch: Branch::Symmetric,
            refine: true,
        }
    }
}

impl QuadratureConfig {
    pub fn new(bins: usize, branch: Branch) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Argument("quadrature needs at least one bin".into()));
        }
        Ok(Self {
            bins,
            branch,
            refine: true,
        })
    }

    /// The plain equal-mass rule, no refinement.
    pub fn plain(mut self) -> Self {
        self.refine = false;
        self
    }
}

/// Midpoint-quantile nodes for a given prior order ν, on the unit scale.
///
/// Nodes depend on τ² only through a common factor √(2τ²), so one set serves
/// every point of a curve.
#[derive(Debug, Clone)]
pub struct MarginalIntegrator {
    nu: f64,
    config: QuadratureConfig,
    /// √F⁻¹(q_i; ν + ½, 1)
    unit_nodes: Vec<f64>,
    /// F⁻¹(i/B; ν + ½, 1) for i = 0..=B, when refining.
    edges: Vec<f64>,
}

impl MarginalIntegrator {
    pub fn new(nu: f64, config: QuadratureConfig) -> Result<Self> {
        if !(nu >= 1.0 && nu.is_finite()) {
            return Err(Error::domain("MarginalIntegrator", format!("nu = {nu} must be >= 1")));
        }
        let b = config.bins as f64;
        let unit_nodes = (1..=config.bins)
            .map(|i| gamma_quantile((i as f64 - 0.5) / b, nu + 0.5, 1.0).map(f64::sqrt))
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        if config.refine {
            edges.push(0.0);
            for i in 1..config.bins {
                edges.push(gamma_quantile(i as f64 / b, nu + 0.5, 1.0)?);
            }
            edges.push(f64::INFINITY);
        }
        Ok(Self {
            nu,
            config,
            unit_nodes,
            edges,
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn config(&self) -> QuadratureConfig {
        self.config
    }

    /// ln m₁(t | τ², ν).
    pub fn log_m1(&self, dens: &PartialCorrDensity, t: f64, tau2: f64) -> Result<f64> {
        if !(tau2 > 0.0 && tau2.is_finite()) {
            return Err(Error::domain("log_marginal_m1", format!("tau2 = {tau2} must be > 0")));
        }
        let scale = (2.0 * tau2).sqrt();
        let logs = self
            .unit_nodes
            .iter()
            .map(|&u| self.log_integrand(dens, t, scale * u))
            .collect::<Result<Vec<_>>>()?;
        let plain = log_mean_exp(&logs);
        if !self.config.refine || logs.len() < 2 || plain == f64::NEG_INFINITY {
            return Ok(plain);
        }
        let bins = logs.len();
        let width = 1.0 / bins as f64;
        let rough = |i: usize| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(bins - 1);
            let peak = logs[lo..=hi].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let jump = (logs[lo] - logs[i]).abs().max((logs[hi] - logs[i]).abs());
            peak - plain > REFINE_NEGLIGIBLE && !(jump <= REFINE_JUMP)
        };
        // contributions relative to exp(plain)
        let tol = REFINE_REL_TOL * width;
        let mut total = 0.0;
        let mut comp = 0.0;
        for i in 0..bins {
            let part = if rough(i) {
                self.refine_bin(dens, t, scale, plain, self.edges[i], self.edges[i + 1], tol)?
            } else {
                (logs[i] - plain).exp() * width
            };
            // Neumaier
            let s = total + part;
            comp += if total.abs() >= part.abs() { (total - s) + part } else { (part - s) + total };
            total = s;
        }
        Ok(plain + (total + comp).ln())
    }

    /// Probability-weighted integrand over [lo, hi] in x = λ²/(2τ²), relative
    /// to exp(plain). Working in x rather than q keeps far-tail mass reachable.
    #[allow(clippy::too_many_arguments)]
    fn refine_bin(
        &self,
        dens: &PartialCorrDensity,
        t: f64,
        scale: f64,
        plain: f64,
        lo: f64,
        hi: f64,
        tol: f64,
    ) -> Result<f64> {
        let shape = self.nu + 0.5;
        let ln_norm = ln_gamma_pos(shape);
        let failed = std::cell::Cell::new(None);
        let at = |x: f64| -> f64 {
            if x <= 0.0 {
                return 0.0;
            }
            match self.log_integrand(dens, t, scale * x.sqrt()) {
                Ok(v) => (v + (shape - 1.0) * x.ln() - x - ln_norm - plain).exp(),
                Err(e) => {
                    failed.set(Some(e));
                    0.0
                }
            }
        };
        let v = if hi.is_finite() {
            integrate(at, lo, hi, tol, REFINE_REL_TOL)?
        } else {
            // x = lo + s/(1−s)
            let mapped = |s: f64| {
                let u = 1.0 - s;
                if u <= 0.0 {
                    return 0.0;
                }
                at(lo + s / u) / (u * u)
            };
            integrate(mapped, 0.0, 1.0, tol, REFINE_REL_TOL)?
        };
        match failed.take() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    fn log_integrand(&self, dens: &PartialCorrDensity, t: f64, lambda: f64) -> Result<f64> {
        let up = checked_log_density(dens, t, lambda)?;
        if self.config.branch == Branch::Positive {
            return Ok(up);
        }
        let down = checked_log_density(dens, t, -lambda)?;
        let m = up.max(down);
        if m == f64::NEG_INFINITY {
            return Ok(m);
        }
        Ok(m + (0.5 * ((up - m).exp() + (down - m).exp())).ln())
    }
}

fn checked_log_density(dens: &PartialCorrDensity, t: f64, lambda: f64) -> Result<f64> {
    let v = dens.ln_t(t, lambda).map_err(|e| match e {
        Error::Boundary { .. } | Error::Numerical { .. } => Error::numerical(
            "log_marginal_m1",
            format!("integrand failed at lambda = {lambda}: {e}"),
        ),
        other => other,
    })?;
    if v.is_nan() || v == f64::INFINITY {
        return Err(Error::numerical(
            "log_marginal_m1",
            format!("non-finite integrand at lambda = {lambda}"),
        ));
    }
    Ok(v)
}

/// ln((1/N) Σ exp(x_i)), summed in index order.
fn log_mean_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: f64 = xs.iter().map(|x| (x - max).exp()).sum();
    max + (s / xs.len() as f64).ln()
}

/// τ² = (n−p−1)ω²/(2ν).
pub fn tau2_from_omega(omega: EffectSize, n: usize, p: usize, nu: f64) -> Result<f64> {
    let w = omega.value();
    if w == 0.0 {
        return Err(Error::Argument(
            "omega = 0 places the prior mode on the null; the Bayes factor is 1".into(),
        ));
    }
    if !(nu >= 1.0) {
        return Err(Error::domain("tau2_from_omega", format!("nu = {nu} must be >= 1")));
    }
    if n < p + 2 {
        return Err(Error::Argument(format!("n - p - 1 must be >= 1 (n = {n}, p = {p})")));
    }
    Ok((n - p - 1) as f64 * w * w / (2.0 * nu))
}

/// ln m₁(t₁ | τ², ν) for a single summary and prior.
pub fn log_marginal_m1(
    summary: &TestSummary,
    prior: &NormalMomentPrior,
    config: QuadratureConfig,
) -> Result<f64> {
    let dens = PartialCorrDensity::new(summary.n, summary.p)?;
    MarginalIntegrator::new(prior.nu(), config)?.log_m1(&dens, summary.t1, prior.tau2())
}

/// Evaluates BFF points for one (n, p) with shared quadrature nodes.
#[derive(Debug, Clone)]
pub struct BffEvaluator {
    dens: PartialCorrDensity,
    integrator: MarginalIntegrator,
}

impl BffEvaluator {
    pub fn new(n: usize, p: usize, nu: f64, config: QuadratureConfig) -> Result<Self> {
        Ok(Self {
            dens: PartialCorrDensity::new(n, p)?,
            integrator: MarginalIntegrator::new(nu, config)?,
        })
    }

    /// Reuses the nodes of `integrator` for a different (n, p).
    pub fn with_integrator(n: usize, p: usize, integrator: MarginalIntegrator) -> Result<Self> {
        Ok(Self {
            dens: PartialCorrDensity::new(n, p)?,
            integrator,
        })
    }

    pub fn density(&self) -> &PartialCorrDensity {
        &self.dens
    }

    pub fn nu(&self) -> f64 {
        self.integrator.nu()
    }

    /// ln BF₁₀ for a prior whose mode sits at effect size ω; 0 at ω = 0.
    pub fn log_bf10_omega(&self, t: f64, omega: f64) -> Result<f64> {
        if omega == 0.0 {
            return Ok(0.0);
        }
        let df = self.dens.df();
        let tau2 = df * omega * omega / (2.0 * self.nu());
        Ok(self.integrator.log_m1(&self.dens, t, tau2)? - t_logpdf_unchecked(t, df))
    }

    pub fn point(&self, t: f64, rho_mode: f64) -> Result<BffPoint> {
        if rho_mode == 0.0 {
            return Ok(BffPoint {
                rho_mode,
                omega: 0.0,
                tau2: 0.0,
                log_bf10: 0.0,
            });
        }
        let omega = omega_from_rho(PartialCorr::new(rho_mode)?)?.value();
        let tau2 = self.dens.df() * omega * omega / (2.0 * self.nu());
        Ok(BffPoint {
            rho_mode,
            omega,
            tau2,
            log_bf10: self.log_bf10_omega(t, omega)?,
        })
    }

    /// ln f(t|λ) − ln f(t|0).
    pub fn true_log_bf(&self, t: f64, lambda: f64) -> Result<f64> {
        Ok(self.dens.ln_t(t, lambda)? - self.dens.ln_t(t, 0.0)?)
    }
}

/// ln BF₁₀ = ln m₁ − ln m₀ with the prior mode at `rho_mode`, default
/// quadrature.
pub fn log_bf10(summary: &TestSummary, rho_mode: f64, nu: f64) -> Result<f64> {
    log_bf10_with(summary, rho_mode, nu, QuadratureConfig::default())
}

pub fn log_bf10_with(
    summary: &TestSummary,
    rho_mode: f64,
    nu: f64,
    config: QuadratureConfig,
) -> Result<f64> {
    if !(rho_mode.abs() < 1.0) {
        return Err(Error::domain("log_bf10", format!("|rho_mode| = {} must be < 1", rho_mode.abs())));
    }
    if rho_mode == 0.0 {
        return Ok(0.0);
    }
    let ev = BffEvaluator::new(summary.n, summary.p, nu, config)?;
    Ok(ev.point(summary.t1, rho_mode)?.log_bf10)
}

/// log Bayes factor at the true non-centrality: ln f(t₁|λ) − ln f(t₁|0).
pub fn true_log_bf(summary: &TestSummary, lambda: f64) -> Result<f64> {
    let dens = PartialCorrDensity::new(summary.n, summary.p)?;
    Ok(dens.ln_t(summary.t1, lambda)? - dens.ln_t(summary.t1, 0.0)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BffPoint {
    pub rho_mode: f64,
    pub omega: f64,
    pub tau2: f64,
    pub log_bf10: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BffCurve {
    pub summary: TestSummary,
    pub nu: f64,
    pub quadrature_bins: usize,
    pub branch: Branch,
    pub points: Vec<BffPoint>,
}

/// 199 evenly spaced values on [−0.99, 0.99], including exactly 0.
pub fn default_rho_grid() -> Vec<f64> {
    rho_grid(-DEFAULT_GRID_LIMIT, DEFAULT_GRID_LIMIT, DEFAULT_GRID_POINTS)
}

/// `count` evenly spaced values on [min, max]; a value within 1e-12 of 0
/// is snapped to 0.
pub fn rho_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    let step = (max - min) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            let v = min + step * i as f64;
            if v.abs() < 1e-12 {
                0.0
            } else {
                v
            }
        })
        .collect()
}

pub fn bff_curve(summary: &TestSummary, rho_grid: &[f64], nu: f64) -> Result<BffCurve> {
    bff_curve_with(summary, rho_grid, nu, QuadratureConfig::default())
}

/// One point per grid value. Points are evaluated in parallel; each is a
/// sequential computation, so results do not depend on the thread count.
pub fn bff_curve_with(
    summary: &TestSummary,
    rho_grid: &[f64],
    nu: f64,
    config: QuadratureConfig,
) -> Result<BffCurve> {
    if rho_grid.is_empty() {
        return Err(Error::Argument("rho grid is empty".into()));
    }
    if let Some(bad) = rho_grid.iter().find(|v| !(v.abs() < 1.0)) {
        return Err(Error::Argument(format!("grid value {bad} outside (-1, 1)")));
    }
    if rho_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Argument("rho grid must be strictly increasing".into()));
    }
    let ev = BffEvaluator::new(summary.n, summary.p, nu, config)?;
    let points = rho_grid
        .par_iter()
        .map(|&rho| ev.point(summary.t1, rho))
        .collect::<Result<Vec<_>>>()?;
    Ok(BffCurve {
        summary: *summary,
        nu,
        quadrature_bins: config.bins,
        branch: config.branch,
        points,
    })
}

impl BffCurve {
    /// Grid locations (by linear interpolation in ρ*) where ln BF₁₀ crosses
    /// `level`.
    pub fn crossings(&self, level: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for w in self.points.windows(2) {
            let (a, b) = (w[0].log_bf10 - level, w[1].log_bf10 - level);
            if a == 0.0 {
                out.push(w[0].rho_mode);
            } else if a * b < 0.0 {
                let frac = a / (a - b);
                out.push(w[0].rho_mode + frac * (w[1].rho_mode - w[0].rho_mode));
            }
        }
        if let Some(last) = self.points.last() {
            if last.log_bf10 == level {
                out.push(last.rho_mode);
            }
        }
        out
    }

    /// Smallest positive ρ* at which the curve crosses `level`.
    pub fn first_positive_crossing(&self, level: f64) -> Option<f64> {
        self.crossings(level).into_iter().filter(|&r| r > 0.0).reduce(f64::min)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["rho_mode", "omega", "tau2", "log_bf10"])?;
        for pt in &self.points {
            wtr.write_record(&[
                pt.rho_mode.to_string(),
                pt.omega.to_string(),
                pt.tau2.to_string(),
                pt.log_bf10.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = CurveJson {
            t: self.summary.t1,
            n: self.summary.n,
            p: self.summary.p,
            df: self.summary.df(),
            nu: self.nu,
            bins: self.quadrature_bins,
            branch: self.branch,
            points: &self.points,
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

#[derive(Serialize)]
struct CurveJson<'a> {
    t: f64,
    n: usize,
    p: usize,
    df: usize,
    nu: f64,
    bins: usize,
    branch: Branch,
    points: &'a [BffPoint],
}

/// Point of maximum evidence among grid points with ω ≥ `omega_min`; ties go
/// to the smaller ω. Returns (ω at max, ln BF at max).
pub fn max_bff(curve: &BffCurve, omega_min: f64) -> Result<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for pt in curve.points.iter().filter(|pt| pt.omega >= omega_min) {
        best = match best {
            None => Some((pt.omega, pt.log_bf10)),
            Some((w, v)) if pt.log_bf10 > v || (pt.log_bf10 == v && pt.omega < w) => {
                Some((pt.omega, pt.log_bf10))
            }
            keep => keep,
        };
    }
    best.ok_or_else(|| Error::Argument(format!("no grid point with omega >= {omega_min}")))
}

/// Which side(s) of zero the prior on the non-centrality covers in
/// [`closed_form_t_bf_sided`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sidedness {
    /// π_nm over the whole real line.
    TwoSided,
    /// 2·π_nm restricted to λ > 0.
    Positive,
    /// 2·π_nm restricted to λ < 0.
    Negative,
}

/// Closed-form BF₁₀ for an ordinary t statistic on `df` degrees of freedom,
/// t | λ ~ T_df(λ), with λ ~ π_nm(τ², ν) over the real line.
///
/// With y = τt/√((df+t²)(1+τ²)) and c = (1+τ²)^{−(ν+½)}, this is
/// c·₂F₁((df+1)/2, ν+½; ½; y²). The odd term
/// y·Γ(df/2+1)/Γ((df+1)/2)·Γ(ν+1)/Γ(ν+½)·₂F₁(df/2+1, ν+1; 3/2; y²) cancels
/// for a symmetric prior; see [`closed_form_t_bf_sided`].
pub fn closed_form_t_bf(t: f64, df: f64, tau2: f64, nu: f64) -> Result<f64> {
    closed_form_t_bf_sided(t, df, tau2, nu, Sidedness::TwoSided)
}

pub fn closed_form_t_bf_sided(t: f64, df: f64, tau2: f64, nu: f64, side: Sidedness) -> Result<f64> {
    if !(tau2 > 0.0) || !(df >= 1.0) || !t.is_finite() || !(nu >= 1.0) {
        return Err(Error::domain(
            "closed_form_t_bf",
            format!("need tau2 > 0, df >= 1, nu >= 1 (t = {t}, df = {df}, tau2 = {tau2}, nu = {nu})"),
        ));
    }
    let y = (tau2.sqrt() * t) / ((df + t * t) * (1.0 + tau2)).sqrt();
    let y2 = y * y;
    let ln_c = -(nu + 0.5) * tau2.ln_1p();
    let even = (ln_c + ln_gauss_2f1(&Hyp2f1Params::new(0.5 * (df + 1.0), nu + 0.5, 0.5, y2))?).exp();
    let sign = match side {
        Sidedness::TwoSided => return Ok(even),
        Sidedness::Positive => 1.0,
        Sidedness::Negative => -1.0,
    };
    let ln_gamma_ratio = ln_gamma_pos(0.5 * df + 1.0) - ln_gamma_pos(0.5 * (df + 1.0))
        + ln_gamma_pos(nu + 1.0)
        - ln_gamma_pos(nu + 0.5);
    let odd = y
        * (ln_c + ln_gamma_ratio + ln_gauss_2f1(&Hyp2f1Params::new(0.5 * df + 1.0, nu + 1.0, 1.5, y2))?)
            .exp();
    Ok(even + sign * 2.0 * odd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn summary(t: f64, n: usize, p: usize) -> TestSummary {
        TestSummary::new(t, n, p).unwrap()
    }

    #[test]
    fn tau2_arithmetic() {
        let w = EffectSize::new(0.5).unwrap();
        assert_relative_eq!(tau2_from_omega(w, 40, 2, 1.0).unwrap(), 4.625, max_relative = 1e-15);
        assert_relative_eq!(
            tau2_from_omega(w, 40, 2, 2.0).unwrap(),
            0.5 * tau2_from_omega(w, 40, 2, 1.0).unwrap(),
            max_relative = 1e-15
        );
        assert!(tau2_from_omega(EffectSize::new(0.0).unwrap(), 40, 2, 1.0).is_err());
        assert!(tau2_from_omega(w, 40, 2, 0.5).is_err());
    }

    #[test]
    fn zero_mode_is_exactly_zero() {
        let s = summary(1.3, 30, 2);
        assert_eq!(log_bf10(&s, 0.0, 1.0).unwrap(), 0.0);
        let curve = bff_curve(&s, &[0.0], 1.0).unwrap();
        assert_eq!(curve.points[0].log_bf10, 0.0);
        assert_eq!(true_log_bf(&s, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn tiny_prior_scale_gives_zero_log_bf() {
        let s = summary(2.0, 50, 2);
        let dens = PartialCorrDensity::new(50, 2).unwrap();
        let integ = MarginalIntegrator::new(1.0, QuadratureConfig::new(1000, Branch::Symmetric).unwrap()).unwrap();
        let lm1 = integ.log_m1(&dens, s.t1, 1e-12).unwrap();
        assert!((lm1 - dens.ln_t(s.t1, 0.0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn curve_grid_validation() {
        let s = summary(0.5, 30, 2);
        assert!(bff_curve(&s, &[], 1.0).is_err());
        assert!(bff_curve(&s, &[0.2, 0.1], 1.0).is_err());
        assert!(bff_curve(&s, &[0.2, 1.0], 1.0).is_err());
    }

    #[test]
    fn default_grid_shape() {
        let g = default_rho_grid();
        assert_eq!(g.len(), 199);
        assert_eq!(g[99], 0.0);
        assert_relative_eq!(g[0], -0.99);
        assert_relative_eq!(g[198], 0.99);
    }

    #[test]
    fn max_bff_selection() {
        let mk = |pairs: &[(f64, f64)]| BffCurve {
            summary: summary(1.0, 30, 2),
            nu: 1.0,
            quadrature_bins: 10,
            branch: Branch::Symmetric,
            points: pairs
                .iter()
                .map(|&(omega, v)| BffPoint {
                    rho_mode: omega / (1.0 + omega * omega).sqrt(),
                    omega,
                    tau2: 1.0,
                    log_bf10: v,
                })
                .collect(),
        };
        assert_eq!(max_bff(&mk(&[(0.3, -1.0)]), 0.0).unwrap(), (0.3, -1.0));
        let dec = mk(&[(0.1, -0.1), (0.2, -0.5), (0.3, -0.9)]);
        assert_eq!(max_bff(&dec, 0.0).unwrap(), (0.1, -0.1));
        assert_eq!(max_bff(&dec, 0.15).unwrap(), (0.2, -0.5));
        let tie = mk(&[(0.1, 1.0), (0.2, 2.0), (0.3, 2.0)]);
        assert_eq!(max_bff(&tie, 0.0).unwrap(), (0.2, 2.0));
        assert!(max_bff(&dec, 0.5).is_err());
    }

    #[test]
    fn crossings_interpolate() {
        let pts = [(0.0, 0.0), (0.1, -1.0), (0.2, -3.0)];
        let curve = BffCurve {
            summary: summary(1.0, 30, 2),
            nu: 1.0,
            quadrature_bins: 10,
            branch: Branch::Symmetric,
            points: pts
                .iter()
                .map(|&(r, v)| BffPoint {
                    rho_mode: r,
                    omega: r,
                    tau2: 0.0,
                    log_bf10: v,
                })
                .collect(),
        };
        assert_relative_eq!(curve.first_positive_crossing(-2.0).unwrap(), 0.15);
        assert!(curve.first_positive_crossing(-5.0).is_none());
    }

    #[test]
    fn closed_form_limits() {
        // τ² → 0
        let v = closed_form_t_bf(1.7, 12.0, 1e-12, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        // t = 0: (1+τ²)^(−ν−½)
        let v = closed_form_t_bf(0.0, 12.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(v, 3f64.powf(-1.5), max_relative = 1e-14);
        assert!(v < 1.0);
        // sided versions average to the two-sided one
        let pos = closed_form_t_bf_sided(1.2, 9.0, 1.5, 1.0, Sidedness::Positive).unwrap();
        let neg = closed_form_t_bf_sided(1.2, 9.0, 1.5, 1.0, Sidedness::Negative).unwrap();
        let two = closed_form_t_bf(1.2, 9.0, 1.5, 1.0).unwrap();
        assert_relative_eq!(0.5 * (pos + neg), two, max_relative = 1e-13);
        assert!(closed_form_t_bf(1.0, 9.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn branch_parse_roundtrip() {
        for b in [Branch::Symmetric, Branch::Positive] {
            assert_eq!(b.to_string().parse::<Branch>().unwrap(), b);
        }
        assert!("both".parse::<Branch>().is_err());
    }
}
