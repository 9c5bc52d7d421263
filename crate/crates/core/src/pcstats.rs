//! Multivariate normal correlation model: sufficient statistics, the partial
//! correlation MLE r*, the test statistic t₁ and effect-size transforms.
//!
//! The tested predictor is permuted to the first position of the predictor
//! block before any partitioning, so `Ξ̂₁₁.₂` always refers to the target
//! column conditioned on the remaining predictors.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Condition number of the standardized design above which it is treated as
/// rank deficient.
pub const COLLINEARITY_THRESHOLD: f64 = 1e12;

/// Raw data: response `y` and an n×p predictor matrix `x`.
#[derive(Debug, Clone)]
pub struct DataMatrix {
    y: DVector<f64>,
    x: DMatrix<f64>,
    target: usize,
    names: Vec<String>,
}

impl DataMatrix {
    /// `target` indexes the column of `x` whose partial correlation with `y`
    /// is tested; the other columns form the conditioning set.
    pub fn new(y: Vec<f64>, x: DMatrix<f64>, target: usize) -> Result<Self> {
        let names = (0..x.ncols()).map(|j| format!("x{}", j + 1)).collect();
        Self::with_names(y, x, target, names)
    }

    pub fn with_names(y: Vec<f64>, x: DMatrix<f64>, target: usize, names: Vec<String>) -> Result<Self> {
        let n = y.len();
        let p = x.ncols();
        if x.nrows() != n {
            return Err(Error::Argument(format!(
                "response has {n} rows but predictors have {}",
                x.nrows()
            )));
        }
        if p == 0 {
            return Err(Error::Argument("at least one predictor is required".into()));
        }
        if target >= p {
            return Err(Error::Argument(format!("target column {target} out of range (p = {p})")));
        }
        if n <= p + 1 {
            return Err(Error::Argument(format!("need n > p + 1, got n = {n}, p = {p}")));
        }
        if names.len() != p {
            return Err(Error::Argument("one name per predictor column is required".into()));
        }
        if y.iter().chain(x.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Input("data contain non-finite values".into()));
        }
        Ok(Self {
            y: DVector::from_vec(y),
            x,
            target,
            names,
        })
    }

    /// Reads a comma-separated file with a header row. `conditioning`
    /// defaults to every column other than `response` and `target`.
    pub fn from_csv<R: std::io::Read>(
        rdr: R,
        response: &str,
        target: &str,
        conditioning: Option<&[String]>,
    ) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(rdr);
        let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
        let find = |name: &str| {
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Input(format!("column '{name}' not found (have {header:?})")))
        };
        let yi = find(response)?;
        let ti = find(target)?;
        if yi == ti {
            return Err(Error::Input("response and target must differ".into()));
        }
        let cond: Vec<usize> = match conditioning {
            Some(names) => names.iter().map(|c| find(c)).collect::<Result<_>>()?,
            None => (0..header.len()).filter(|&j| j != yi && j != ti).collect(),
        };
        if cond.iter().any(|&j| j == yi || j == ti) {
            return Err(Error::Input("conditioning set overlaps response or target".into()));
        }
        let cols: Vec<usize> = std::iter::once(ti).chain(cond).collect();
        let (mut y, mut xs) = (Vec::new(), Vec::new());
        for (line, row) in rdr.records().enumerate() {
            let row = row?;
            let get = |j: usize| -> Result<f64> {
                let cell = row.get(j).unwrap_or("").trim();
                cell.parse::<f64>().map_err(|_| {
                    Error::Input(format!("row {}: '{}' in column '{}' is not a number", line + 2, cell, header[j]))
                })
            };
            y.push(get(yi)?);
            for &j in &cols {
                xs.push(get(j)?);
            }
        }
        let n = y.len();
        let x = DMatrix::from_row_slice(n, cols.len(), &xs);
        let names = cols.iter().map(|&j| header[j].clone()).collect();
        Self::with_names(y, x, 0, names)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Column order with the target first, then the conditioning set in
    /// original order.
    fn column_order(&self) -> Vec<usize> {
        std::iter::once(self.target)
            .chain((0..self.p()).filter(|&j| j != self.target))
            .collect()
    }
}

/// Covariance blocks of Σ̂ partitioned as (response, predictors).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaBlocks {
    pub s11: f64,
    pub s12: Vec<f64>,
    /// Row-major p×p.
    pub s22: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficientStats {
    pub n: usize,
    pub p: usize,
    pub gamma1_hat: f64,
    pub xi112_hat: f64,
    pub sigma2_hat: f64,
    /// (δ̂, γ̂) with the target coefficient first in γ̂.
    pub beta_hat: Vec<f64>,
    /// (μ̂₁, μ̂₂) with the target mean first in μ̂₂.
    pub mu_hat: Vec<f64>,
    pub sigma_hat: SigmaBlocks,
}

impl SufficientStats {
    pub fn df(&self) -> usize {
        self.n - self.p - 1
    }

    pub fn s22(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.p, self.p, &self.sigma_hat.s22)
    }
}

/// A correlation-type value (r* or ρ*).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PartialCorr(f64);

impl PartialCorr {
    /// Accepts values in [−1, 1]; densities additionally require the open
    /// interval.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (-1.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::domain("PartialCorr", format!("{value} outside [-1, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_interior(self) -> bool {
        self.0.abs() < 1.0
    }
}

/// Standardized effect size ω = ρ*/√(1−ρ*²).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EffectSize(f64);

impl EffectSize {
    pub fn new(omega: f64) -> Result<Self> {
        if omega.is_finite() {
            Ok(Self(omega))
        } else {
            Err(Error::domain("EffectSize", format!("omega = {omega} must be finite")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// (t₁, n, p): the minimal input for every Bayes factor in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSummary {
    pub t1: f64,
    pub n: usize,
    pub p: usize,
}

impl TestSummary {
    pub fn new(t1: f64, n: usize, p: usize) -> Result<Self> {
        if !t1.is_finite() {
            return Err(Error::Argument(format!("t statistic {t1} is not finite")));
        }
        if n < p + 2 {
            return Err(Error::Argument(format!(
                "degrees of freedom n - p - 1 must be >= 1 (n = {n}, p = {p})"
            )));
        }
        Ok(Self { t1, n, p })
    }

    /// Residual degrees of freedom n − p − 1.
    pub fn df(&self) -> usize {
        self.n - self.p - 1
    }

    /// r* recovered from t₁: v(t₁) = t₁/√(t₁² + n − p − 1).
    pub fn r(&self) -> f64 {
        r_from_t(self.t1, self.df() as f64)
    }
}

/// v(t) = t/√(t² + df).
pub fn r_from_t(t: f64, df: f64) -> f64 {
    t / (t * t + df).sqrt()
}

/// u(λ) = λ/√(df + λ²).
pub fn rho_from_lambda(lambda: f64, df: f64) -> f64 {
    lambda / (df + lambda * lambda).sqrt()
}

fn sample_mean(v: impl Iterator<Item = f64>, n: usize) -> f64 {
    v.sum::<f64>() / n as f64
}

/// Computes β̂, σ̂², μ̂ and the Σ̂ blocks, and Ξ̂₁₁.₂ for the target column.
pub fn sufficient_stats(d: &DataMatrix) -> Result<SufficientStats> {
    let n = d.n();
    let p = d.p();
    let order = d.column_order();
    let nf = n as f64;

    // Z = (Y, X1, X2...) centered
    let mut z = DMatrix::<f64>::zeros(n, p + 1);
    z.set_column(0, d.y());
    for (k, &j) in order.iter().enumerate() {
        z.set_column(k + 1, &d.x().column(j));
    }
    let mu_hat: Vec<f64> = (0..=p).map(|j| sample_mean(z.column(j).iter().copied(), n)).collect();
    let mut zc = z.clone();
    for (j, mu) in mu_hat.iter().enumerate() {
        zc.column_mut(j).add_scalar_mut(-mu);
    }

    check_rank(&zc, d, &order)?;

    let cov = zc.transpose() * &zc / (nf - 1.0);
    let s11 = cov[(0, 0)];
    let s12: Vec<f64> = (1..=p).map(|j| cov[(0, j)]).collect();
    let s22m = cov.view((1, 1), (p, p)).into_owned();

    // β̂ = (W'W)^-1 W'Y via QR of W = [1 X]
    let mut w = DMatrix::<f64>::from_element(n, p + 1, 1.0);
    for k in 0..p {
        w.set_column(k + 1, &z.column(k + 1));
    }
    let qr = w.clone().qr();
    let qty = qr.q().transpose() * d.y();
    let beta = qr
        .r()
        .solve_upper_triangular(&qty)
        .ok_or_else(|| singular("upper-triangular solve failed", d, &order))?;
    let resid = d.y() - &w * &beta;
    let sigma2_hat = resid.norm_squared() / (n - p - 1) as f64;

    let xi112_hat = if p == 1 {
        s22m[(0, 0)]
    } else {
        let x22 = s22m.view((1, 1), (p - 1, p - 1)).into_owned();
        let x21 = s22m.view((1, 0), (p - 1, 1)).into_owned();
        let sol = x22
            .clone()
            .cholesky()
            .map(|c| c.solve(&x21))
            .ok_or_else(|| singular("conditioning block is not positive definite", d, &order))?;
        s22m[(0, 0)] - (x21.transpose() * sol)[(0, 0)]
    };

    Ok(SufficientStats {
        n,
        p,
        gamma1_hat: beta[1],
        xi112_hat: xi112_hat.max(0.0),
        sigma2_hat,
        beta_hat: beta.iter().copied().collect(),
        mu_hat,
        sigma_hat: SigmaBlocks {
            s11,
            s12,
            s22: s22m.transpose().iter().copied().collect(),
        },
    })
}

fn singular(msg: &str, d: &DataMatrix, order: &[usize]) -> Error {
    Error::Singular {
        msg: msg.to_string(),
        columns: order.iter().map(|&j| d.names()[j].clone()).collect(),
    }
}

/// Rank check on the standardized, centered predictor block: constant
/// columns, or a condition number above [`COLLINEARITY_THRESHOLD`].
fn check_rank(zc: &DMatrix<f64>, d: &DataMatrix, order: &[usize]) -> Result<()> {
    let p = d.p();
    let mut xs = zc.columns(1, p).into_owned();
    let mut constant = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        let norm = xs.column(k).norm();
        let scale = d.x().column(j).amax().max(f64::MIN_POSITIVE);
        if norm <= 1e-12 * scale * (d.n() as f64).sqrt() {
            constant.push(d.names()[j].clone());
        } else {
            xs.column_mut(k).scale_mut(1.0 / norm);
        }
    }
    if !constant.is_empty() {
        return Err(Error::Singular {
            msg: "predictor column is constant (collinear with the intercept)".into(),
            columns: constant,
        });
    }
    let svd = xs.svd(false, true);
    let sv = &svd.singular_values;
    let (imin, smin) = sv.argmin();
    let smax = sv.max();
    if smin <= 0.0 || smax / smin > COLLINEARITY_THRESHOLD {
        let v_t = svd.v_t.as_ref().expect("requested V");
        let row = v_t.row(imin);
        let columns = order
            .iter()
            .enumerate()
            .filter(|(k, _)| row[*k].abs() > 0.1)
            .map(|(_, &j)| d.names()[j].clone())
            .collect();
        return Err(Error::Singular {
            msg: format!("design matrix is rank deficient (condition number {:.3e})", smax / smin),
            columns,
        });
    }
    Ok(())
}

/// r* = γ̂₁√Ξ̂₁₁.₂ / √(((n−p−1)/(n−1))σ̂² + γ̂₁²Ξ̂₁₁.₂).
pub fn partial_corr_mle(s: &SufficientStats) -> Result<PartialCorr> {
    if !(s.xi112_hat > 0.0) {
        return Err(Error::Degenerate(
            "target predictor is collinear with the conditioning set (Xi_11.2 = 0)".into(),
        ));
    }
    let scaled_rss = (s.df() as f64 / (s.n - 1) as f64) * s.sigma2_hat;
    let num = s.gamma1_hat * s.xi112_hat.sqrt();
    let den = (scaled_rss + s.gamma1_hat * s.gamma1_hat * s.xi112_hat).sqrt();
    if den == 0.0 {
        return Ok(PartialCorr(0.0));
    }
    PartialCorr::new((num / den).clamp(-1.0, 1.0))
}

/// t₁ = √(n−p−1)·r*/√(1−r*²).
pub fn t_statistic(r: PartialCorr, n: usize, p: usize) -> Result<TestSummary> {
    if !r.is_interior() {
        return Err(Error::InfiniteStatistic);
    }
    if n < p + 2 {
        return Err(Error::Argument(format!("n - p - 1 must be >= 1 (n = {n}, p = {p})")));
    }
    let df = (n - p - 1) as f64;
    let rv = r.value();
    TestSummary::new(df.sqrt() * rv / (1.0 - rv * rv).sqrt(), n, p)
}

pub fn omega_from_rho(rho: PartialCorr) -> Result<EffectSize> {
    if !rho.is_interior() {
        return Err(Error::domain("omega_from_rho", "|rho| must be < 1"));
    }
    let r = rho.value();
    Ok(EffectSize(r / (1.0 - r * r).sqrt()))
}

pub fn rho_from_omega(omega: EffectSize) -> PartialCorr {
    let w = omega.value();
    PartialCorr(w / (1.0 + w * w).sqrt())
}

/// Non-centrality λ = √(n−p−1)·ω.
pub fn lambda_from_omega(omega: EffectSize, n: usize, p: usize) -> Result<f64> {
    if n < p + 2 {
        return Err(Error::Argument(format!("n - p - 1 must be >= 1 (n = {n}, p = {p})")));
    }
    Ok(((n - p - 1) as f64).sqrt() * omega.value())
}

/// Fisher's z = ½ ln((1+r)/(1−r)).
pub fn fisher_z(r: PartialCorr) -> Result<f64> {
    if !r.is_interior() {
        return Err(Error::domain("fisher_z", "|r| must be < 1"));
    }
    Ok(r.value().atanh())
}
