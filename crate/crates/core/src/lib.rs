//! Bayes factor functions (BFFs) for testing partial correlation
//! coefficients in linear models.
//!
//! The evidence against `H₀: ρ* = 0` is computed from the t statistic of the
//! target coefficient alone, under a normal moment prior on the
//! non-centrality parameter, and reported as a curve over the standardized
//! effect size ω = ρ*/√(1−ρ*²) on which the prior is centered.
//!
//! ```
//! use pcbff::{bff_curve, default_rho_grid, TestSummary};
//!
//! let summary = TestSummary::new(-0.06, 40, 2).unwrap();
//! let curve = bff_curve(&summary, &default_rho_grid(), 1.0).unwrap();
//! let rho2 = curve.first_positive_crossing(-2.0).unwrap();
//! assert!((rho2 - 0.37).abs() < 0.03);
//! ```

pub mod baselines;
pub mod bff;
pub mod cli;
pub mod densities;
pub mod error;
pub mod pcstats;
pub mod quadrature;
pub mod simulate;
pub mod specfun;

pub use baselines::{jzs_log_bf, stretched_beta_log_bf, JzsInput};
pub use bff::{
    bff_curve, bff_curve_with, closed_form_t_bf, default_rho_grid, log_bf10, max_bff, rho_grid,
    true_log_bf, BffCurve, BffEvaluator, BffPoint, Branch, QuadratureConfig,
};
pub use densities::{r_cond_logdensity, t_cond_logdensity, NormalMomentPrior, PartialCorrDensity};
pub use error::{Error, Result};
pub use pcstats::{
    partial_corr_mle, sufficient_stats, t_statistic, DataMatrix, EffectSize, PartialCorr,
    SufficientStats, TestSummary,
};
pub use simulate::{run_alt_oc, run_null_oc, OcResult, SimScenario};
