//! Multivariate normal data with a prescribed partial correlation, and Monte
//! Carlo operating-characteristic (OC) studies of the BFF.
//!
//! Variables are ordered (Y, X, Z): Y is the response, X the tested
//! predictor, Z the conditioning variable. Replicate `i` of cell `c` draws
//! from a ChaCha stream keyed by (seed, c, i), so results do not depend on
//! execution order or thread count.

use std::io::Write;

use nalgebra::{DMatrix, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::stretched_beta_log_bf;
use crate::bff::{BffEvaluator, Branch, MarginalIntegrator, QuadratureConfig};
use crate::error::{Error, Result};
use crate::pcstats::{
    omega_from_rho, partial_corr_mle, sufficient_stats, t_statistic, DataMatrix, PartialCorr,
};

pub const DEFAULT_NUISANCE_CORR: f64 = 0.3;

/// Correlation matrix of (Y, X, Z) with ρ_YZ = ρ_XZ = `nuisance_corr` and
/// ρ_XY chosen so that the partial correlation of X and Y given Z equals
/// `rho_target`.
pub fn build_sigma_with_partial(rho_target: f64, nuisance_corr: f64) -> Result<Matrix3<f64>> {
    if !(rho_target.abs() < 1.0) || !nuisance_corr.is_finite() {
        return Err(Error::Argument(format!(
            "rho_target = {rho_target} must lie in (-1, 1) and nuisance_corr = {nuisance_corr} must be finite"
        )));
    }
    let c = nuisance_corr;
    let rho_xy = rho_target * (1.0 - c * c) + c * c;
    let sigma = Matrix3::new(1.0, rho_xy, c, rho_xy, 1.0, c, c, c, 1.0);
    check_leading_minors(&sigma)?;
    Ok(sigma)
}

fn check_leading_minors(sigma: &Matrix3<f64>) -> Result<()> {
    let m1 = sigma[(0, 0)];
    let m2 = sigma[(0, 0)] * sigma[(1, 1)] - sigma[(0, 1)] * sigma[(1, 0)];
    let m3 = sigma.determinant();
    for (minor, value) in [(1, m1), (2, m2), (3, m3)] {
        if !(value > 0.0) {
            return Err(Error::Infeasible { minor, value });
        }
    }
    Ok(())
}

/// Partial correlation of the first two variables given the third.
pub fn population_partial(sigma: &Matrix3<f64>) -> f64 {
    let (r12, r13, r23) = (sigma[(0, 1)], sigma[(0, 2)], sigma[(1, 2)]);
    (r12 - r13 * r23) / ((1.0 - r13 * r13) * (1.0 - r23 * r23)).sqrt()
}

/// n iid N(0, Σ) rows as L·z with Σ = LLᵀ.
pub fn draw_mvn<R: Rng + ?Sized>(sigma: &DMatrix<f64>, n: usize, rng: &mut R) -> Result<DMatrix<f64>> {
    let d = sigma.nrows();
    let chol = sigma
        .clone()
        .cholesky()
        .ok_or(Error::Infeasible { minor: d, value: sigma.determinant() })?;
    let l = chol.l();
    let mut out = DMatrix::<f64>::zeros(n, d);
    let mut z = vec![0.0; d];
    for i in 0..n {
        for zj in z.iter_mut() {
            *zj = rng.sample(StandardNormal);
        }
        for a in 0..d {
            out[(i, a)] = (0..=a).map(|b| l[(a, b)] * z[b]).sum();
        }
    }
    Ok(out)
}

/// Samples n rows from N(0, Σ); the first coordinate is the response, the
/// second the tested predictor, the rest the conditioning set.
pub fn sample_mvn<R: Rng + ?Sized>(sigma: &DMatrix<f64>, n: usize, rng: &mut R) -> Result<DataMatrix> {
    if sigma.nrows() < 2 || sigma.nrows() != sigma.ncols() {
        return Err(Error::Argument("sigma must be square with dimension >= 2".into()));
    }
    let z = draw_mvn(sigma, n, rng)?;
    let y: Vec<f64> = z.column(0).iter().copied().collect();
    let x = z.columns(1, sigma.ncols() - 1).into_owned();
    DataMatrix::new(y, x, 0)
}

fn cell_rng(seed: u64, cell: u64, replicate: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&cell.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replicate);
    rng
}

/// Deterministic RNG for replicate `replicate` under `seed`.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    cell_rng(seed, 0, replicate)
}

/// Sample partial correlations r* from `replicates` simulated datasets.
pub fn simulate_partial_corrs(
    sigma: &Matrix3<f64>,
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let sigma = DMatrix::from_iterator(3, 3, sigma.iter().copied());
    (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = replicate_rng(seed, i as u64);
            let data = sample_mvn(&sigma, n, &mut rng)?;
            Ok(partial_corr_mle(&sufficient_stats(&data)?)?.value())
        })
        .collect()
}

/// Configuration of an OC study. Deserializable from JSON or TOML; omitted
/// fields take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimScenario {
    pub mode: OcMode,
    pub sample_sizes: Vec<usize>,
    /// Generating partial correlation for the null and point-alternative
    /// studies.
    pub rho_true: f64,
    /// Generating effect sizes ω for the sweep study.
    pub sweep_omegas: Vec<f64>,
    pub nuisance_corr: f64,
    pub replicates: usize,
    pub seed: u64,
    pub nu: f64,
    /// Alternatives ω* at which the BFF is evaluated.
    pub omega_grid: Vec<f64>,
    pub bins: usize,
    pub branch: Branch,
    /// Adaptive bin refinement; off by default since Monte Carlo error
    /// dominates and refinement costs an order of magnitude at small B.
    pub refine: bool,
    pub stretched_alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OcMode {
    #[default]
    Null,
    /// Fixed generating ρ, BFF over the ω* grid.
    Point,
    /// Generating ω swept over `sweep_omegas`; maximum BFF restricted to
    /// ω* ≥ ω.
    Sweep,
}

impl Default for SimScenario {
    fn default() -> Self {
        Self {
            mode: OcMode::Null,
            sample_sizes: vec![25, 50, 100],
            rho_true: 0.0,
            sweep_omegas: Vec::new(),
            nuisance_corr: DEFAULT_NUISANCE_CORR,
            replicates: 2_000,
            seed: 20_250_101,
            nu: 1.0,
            omega_grid: (0..=20).map(|i| i as f64 * 0.05).collect(),
            bins: 1_000,
            branch: Branch::Symmetric,
            refine: false,
            stretched_alpha: 0.5,
        }
    }
}

impl SimScenario {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    fn validate(&self) -> Result<()> {
        if self.sample_sizes.is_empty() || self.sample_sizes.iter().any(|&n| n < 6) {
            return Err(Error::Argument("sample sizes must be non-empty and >= 6".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Argument("replicates must be >= 1".into()));
        }
        if self.omega_grid.is_empty()
            || self.omega_grid.iter().any(|w| !(w.is_finite() && *w >= 0.0))
            || self.omega_grid.windows(2).any(|w| !(w[0] < w[1]))
        {
            return Err(Error::Argument(
                "omega grid must be non-empty, non-negative and strictly increasing".into(),
            ));
        }
        if !self.omega_grid.iter().any(|&w| w > 0.0) {
            return Err(Error::Argument("omega grid needs a positive value".into()));
        }
        if !(self.stretched_alpha > 0.0) {
            return Err(Error::Argument("stretched_alpha must be > 0".into()));
        }
        Ok(())
    }
}

/// One simulated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub r: f64,
    pub t: f64,
    /// ln f(t|λ_true) − ln f(t|0) at the generating non-centrality.
    pub true_log_bf: f64,
    /// Maximum ln BFF over positive grid points with ω* ≥ the restriction.
    pub max_log_bff: f64,
    pub omega_at_max: f64,
    pub stretched_beta_log_bf: f64,
    /// ln BFF at each grid point.
    pub log_bff: Vec<f64>,
    /// True ln BF at the non-centrality of each grid point.
    pub true_log_bf_grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridAggregate {
    pub omega_star: f64,
    pub mean_log_bff: f64,
    pub se_log_bff: f64,
    /// Mean over replicates of max_{ω' ≥ ω*, ω' > 0} ln BFF(ω').
    pub mean_max_log_bff: f64,
    pub mean_true_log_bf: f64,
    pub se_true_log_bf: f64,
    pub mean_stretched_beta_log_bf: f64,
}

/// All replicates for one (n, generating ω).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcCell {
    pub n: usize,
    pub rho_true: f64,
    pub omega_true: f64,
    /// Lower bound on ω* for `max_log_bff`.
    pub max_restriction: f64,
    pub omega_grid: Vec<f64>,
    pub records: Vec<ReplicateRecord>,
    pub aggregates: Vec<GridAggregate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcResult {
    pub mode: OcMode,
    pub cells: Vec<OcCell>,
}

/// Neumaier-compensated mean and standard error, summed in slice order.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let ss = compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean)));
    (mean, (ss / (n - 1.0) / n).sqrt())
}

fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0_f64, 0.0_f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Max of `values[j]` over grid points with ω_j ≥ `lower` and ω_j > 0; ties
/// go to the smaller ω.
fn restricted_max(grid: &[f64], values: &[f64], lower: f64) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for (&w, &v) in grid.iter().zip(values) {
        if w > 0.0 && w >= lower && best.is_none_or(|(_, bv)| v > bv) {
            best = Some((w, v));
        }
    }
    best
}

struct CellSpec {
    index: u64,
    n: usize,
    rho_true: f64,
    omega_true: f64,
    max_restriction: f64,
}

fn run_cell(scn: &SimScenario, spec: &CellSpec, integrator: &MarginalIntegrator) -> Result<OcCell> {
    let sigma3 = build_sigma_with_partial(spec.rho_true, scn.nuisance_corr)?;
    let sigma = DMatrix::from_iterator(3, 3, sigma3.iter().copied());
    let ev = BffEvaluator::with_integrator(spec.n, 2, integrator.clone())?;
    let df = ev.density().df();
    let lambda_true = df.sqrt() * spec.omega_true;
    let grid = &scn.omega_grid;

    let records = (0..scn.replicates)
        .into_par_iter()
        .map(|i| -> Result<ReplicateRecord> {
            let mut rng = cell_rng(scn.seed, spec.index, i as u64);
            let data = sample_mvn(&sigma, spec.n, &mut rng)?;
            let r = partial_corr_mle(&sufficient_stats(&data)?)?;
            let t = t_statistic(r, spec.n, 2)?.t1;
            let log_bff = grid
                .iter()
                .map(|&w| ev.log_bf10_omega(t, w))
                .collect::<Result<Vec<_>>>()?;
            let true_log_bf_grid = grid
                .iter()
                .map(|&w| ev.true_log_bf(t, df.sqrt() * w))
                .collect::<Result<Vec<_>>>()?;
            let (omega_at_max, max_log_bff) = restricted_max(grid, &log_bff, spec.max_restriction)
                .ok_or_else(|| Error::Argument("no grid point satisfies the max restriction".into()))?;
            Ok(ReplicateRecord {
                replicate: i,
                r: r.value(),
                t,
                true_log_bf: ev.true_log_bf(t, lambda_true)?,
                max_log_bff,
                omega_at_max,
                stretched_beta_log_bf: stretched_beta_log_bf(r, spec.n, 1, scn.stretched_alpha)?,
                log_bff,
                true_log_bf_grid,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let aggregates = aggregate(grid, &records);
    Ok(OcCell {
        n: spec.n,
        rho_true: spec.rho_true,
        omega_true: spec.omega_true,
        max_restriction: spec.max_restriction,
        omega_grid: grid.clone(),
        records,
        aggregates,
    })
}

/// Per-grid-point means over replicates.
pub fn aggregate(grid: &[f64], records: &[ReplicateRecord]) -> Vec<GridAggregate> {
    let sb: Vec<f64> = records.iter().map(|r| r.stretched_beta_log_bf).collect();
    let (mean_sb, _) = mean_se(&sb);
    grid.iter()
        .enumerate()
        .map(|(j, &w)| {
            let bff: Vec<f64> = records.iter().map(|r| r.log_bff[j]).collect();
            let tru: Vec<f64> = records.iter().map(|r| r.true_log_bf_grid[j]).collect();
            let maxes: Vec<f64> = records
                .iter()
                .map(|r| restricted_max(grid, &r.log_bff, w).map_or(f64::NAN, |(_, v)| v))
                .collect();
            let (mean_log_bff, se_log_bff) = mean_se(&bff);
            let (mean_true_log_bf, se_true_log_bf) = mean_se(&tru);
            GridAggregate {
                omega_star: w,
                mean_log_bff,
                se_log_bff,
                mean_max_log_bff: mean_se(&maxes).0,
                mean_true_log_bf,
                se_true_log_bf,
                mean_stretched_beta_log_bf: mean_sb,
            }
        })
        .collect()
}

fn shared_integrator(scn: &SimScenario) -> Result<MarginalIntegrator> {
    let mut config = QuadratureConfig::new(scn.bins, scn.branch)?;
    config.refine = scn.refine;
    MarginalIntegrator::new(scn.nu, config)
}

/// OC study with data generated under H₀ (ρ* = 0), one cell per sample size.
pub fn run_null_oc(scn: &SimScenario) -> Result<OcResult> {
    scn.validate()?;
    if scn.rho_true != 0.0 {
        return Err(Error::Argument("null OC requires rho_true = 0".into()));
    }
    let integrator = shared_integrator(scn)?;
    let cells = scn
        .sample_sizes
        .iter()
        .enumerate()
        .map(|(c, &n)| {
            let spec = CellSpec {
                index: c as u64,
                n,
                rho_true: 0.0,
                omega_true: 0.0,
                max_restriction: 0.0,
            };
            run_cell(scn, &spec, &integrator)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OcResult {
        mode: OcMode::Null,
        cells,
    })
}

/// OC study under the alternative.
///
/// [`OcMode::Point`]: one cell per sample size at `rho_true`, maximum BFF over
/// the whole positive grid. [`OcMode::Sweep`]: one cell per (n, ω) with
/// ω ∈ `sweep_omegas`, maximum BFF restricted to ω* ≥ ω.
pub fn run_alt_oc(scn: &SimScenario) -> Result<OcResult> {
    scn.validate()?;
    let integrator = shared_integrator(scn)?;
    let mut specs = Vec::new();
    match scn.mode {
        OcMode::Point | OcMode::Null => {
            if scn.rho_true == 0.0 {
                return Err(Error::Argument("alternative OC requires rho_true != 0".into()));
            }
            let omega = omega_from_rho(PartialCorr::new(scn.rho_true)?)?.value();
            for &n in &scn.sample_sizes {
                specs.push((n, scn.rho_true, omega, 0.0));
            }
        }
        OcMode::Sweep => {
            if scn.sweep_omegas.is_empty() || scn.sweep_omegas.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
                return Err(Error::Argument("sweep needs positive, finite omegas".into()));
            }
            for &n in &scn.sample_sizes {
                for &w in &scn.sweep_omegas {
                    specs.push((n, w / (1.0 + w * w).sqrt(), w, w));
                }
            }
        }
    }
    let cells = specs
        .into_iter()
        .enumerate()
        .map(|(c, (n, rho_true, omega_true, max_restriction))| {
            let spec = CellSpec {
                index: c as u64,
                n,
                rho_true,
                omega_true,
                max_restriction,
            };
            run_cell(scn, &spec, &integrator)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OcResult {
        mode: if scn.mode == OcMode::Sweep { OcMode::Sweep } else { OcMode::Point },
        cells,
    })
}

/// Dispatches on `scn.mode`.
pub fn run_oc(scn: &SimScenario) -> Result<OcResult> {
    match scn.mode {
        OcMode::Null => run_null_oc(scn),
        OcMode::Point | OcMode::Sweep => run_alt_oc(scn),
    }
}

/// Replicate-level means for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub omega_true: f64,
    pub replicates: usize,
    pub mean_max_log_bff: f64,
    pub se_max_log_bff: f64,
    pub mean_true_log_bf: f64,
    pub mean_stretched_beta_log_bf: f64,
    /// Mean |max ln BFF − true ln BF|.
    pub mean_abs_dev_bff: f64,
    /// Mean |stretched-beta ln BF − true ln BF|.
    pub mean_abs_dev_stretched_beta: f64,
}

impl OcCell {
    pub fn summary(&self) -> CellSummary {
        let col = |f: &dyn Fn(&ReplicateRecord) -> f64| -> Vec<f64> { self.records.iter().map(f).collect() };
        let (mean_max_log_bff, se_max_log_bff) = mean_se(&col(&|r| r.max_log_bff));
        CellSummary {
            n: self.n,
            omega_true: self.omega_true,
            replicates: self.records.len(),
            mean_max_log_bff,
            se_max_log_bff,
            mean_true_log_bf: mean_se(&col(&|r| r.true_log_bf)).0,
            mean_stretched_beta_log_bf: mean_se(&col(&|r| r.stretched_beta_log_bf)).0,
            mean_abs_dev_bff: mean_se(&col(&|r| (r.max_log_bff - r.true_log_bf).abs())).0,
            mean_abs_dev_stretched_beta: mean_se(&col(&|r| (r.stretched_beta_log_bf - r.true_log_bf).abs())).0,
        }
    }
}

impl CellSummary {
    pub fn line(&self) -> String {
        format!(
            "n={} omega_true={} reps={} mean_max_log_bff={} (se {}) mean_true_log_bf={} mean_sb_log_bf={} mad_bff={} mad_sb={}",
            self.n,
            self.omega_true,
            self.replicates,
            self.mean_max_log_bff,
            self.se_max_log_bff,
            self.mean_true_log_bf,
            self.mean_stretched_beta_log_bf,
            self.mean_abs_dev_bff,
            self.mean_abs_dev_stretched_beta
        )
    }
}

pub const RECORD_COLUMNS: [&str; 12] = [
    "n",
    "omega_true",
    "replicate",
    "r",
    "t",
    "true_log_bf",
    "max_log_bff",
    "omega_at_max",
    "stretched_beta_log_bf",
    "omega_star",
    "log_bff",
    "true_log_bf_star",
];

pub const AGGREGATE_COLUMNS: [&str; 10] = [
    "n",
    "omega_true",
    "omega_star",
    "mean_log_bff",
    "se_log_bff",
    "mean_max_log_bff",
    "mean_true_log_bf",
    "se_true_log_bf",
    "mean_stretched_beta_log_bf",
    "replicates",
];

impl OcResult {
    /// Long format: one row per (cell, replicate, grid point).
    pub fn write_records_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(RECORD_COLUMNS)?;
        for cell in &self.cells {
            for rec in &cell.records {
                for (j, &w) in cell.omega_grid.iter().enumerate() {
                    wtr.write_record(&[
                        cell.n.to_string(),
                        cell.omega_true.to_string(),
                        rec.replicate.to_string(),
                        rec.r.to_string(),
                        rec.t.to_string(),
                        rec.true_log_bf.to_string(),
                        rec.max_log_bff.to_string(),
                        rec.omega_at_max.to_string(),
                        rec.stretched_beta_log_bf.to_string(),
                        w.to_string(),
                        rec.log_bff[j].to_string(),
                        rec.true_log_bf_grid[j].to_string(),
                    ])?;
                }
            }
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_aggregates_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(AGGREGATE_COLUMNS)?;
        for cell in &self.cells {
            for a in &cell.aggregates {
                wtr.write_record(&[
                    cell.n.to_string(),
                    cell.omega_true.to_string(),
                    a.omega_star.to_string(),
                    a.mean_log_bff.to_string(),
                    a.se_log_bff.to_string(),
                    a.mean_max_log_bff.to_string(),
                    a.mean_true_log_bf.to_string(),
                    a.se_true_log_bf.to_string(),
                    a.mean_stretched_beta_log_bf.to_string(),
                    cell.records.len().to_string(),
                ])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn summaries(&self) -> Vec<CellSummary> {
        self.cells.iter().map(OcCell::summary).collect()
    }
}

/// Reads a records CSV written by [`OcResult::write_records_csv`] and
/// rebuilds the per-cell summaries.
pub fn summaries_from_records_csv<R: std::io::Read>(rdr: R) -> Result<Vec<CellSummary>> {
    let mut rdr = csv::Reader::from_reader(rdr);
    // (n, omega_true bits) -> ordered per-replicate records
    let mut cells: Vec<((usize, u64), Vec<ReplicateRecord>)> = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let num = |i: usize| -> Result<f64> {
            row[i]
                .parse::<f64>()
                .map_err(|e| Error::Input(format!("bad number '{}': {e}", &row[i])))
        };
        let n = num(0)? as usize;
        let omega_true = num(1)?;
        let replicate = num(2)? as usize;
        let key = (n, omega_true.to_bits());
        if cells.last().is_none_or(|(k, _)| *k != key) {
            cells.push((key, Vec::new()));
        }
        let recs = &mut cells.last_mut().expect("pushed").1;
        if recs.last().is_none_or(|r| r.replicate != replicate) {
            recs.push(ReplicateRecord {
                replicate,
                r: num(3)?,
                t: num(4)?,
                true_log_bf: num(5)?,
                max_log_bff: num(6)?,
                omega_at_max: num(7)?,
                stretched_beta_log_bf: num(8)?,
                log_bff: Vec::new(),
                true_log_bf_grid: Vec::new(),
            });
        }
        let rec = recs.last_mut().expect("pushed");
        rec.log_bff.push(num(10)?);
        rec.true_log_bf_grid.push(num(11)?);
    }
    Ok(cells
        .into_iter()
        .map(|((n, wbits), records)| {
            OcCell {
                n,
                rho_true: f64::NAN,
                omega_true: f64::from_bits(wbits),
                max_restriction: f64::NAN,
                omega_grid: Vec::new(),
                records,
                aggregates: Vec::new(),
            }
            .summary()
        })
        .collect())
}
