//! Command-line interface: `curve`, `analyze`, `baselines`, `simulate` and
//! `example`.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical error, 4 model or rank
//! error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::baselines::{jzs_log_bf, jzs_log_bf_std_error, stretched_beta_log_bf, JzsInput};
use crate::bff::{bff_curve_with, rho_grid, BffCurve, Branch, QuadratureConfig, DEFAULT_BINS};
use crate::error::{Error, Result};
use crate::pcstats::{
    fisher_z, partial_corr_mle, sufficient_stats, t_statistic, DataMatrix, PartialCorr, TestSummary,
};
use crate::simulate::{run_oc, SimScenario};
use crate::specfun::student_t_two_sided_p;

pub const OUT_DIR_ENV: &str = "BFFPC_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "pcbff", version, about = "Bayes factor functions for partial correlations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// BFF curve from summary statistics or a CSV dataset.
    Curve(CurveArgs),
    /// Sufficient statistics, r*, t and p-value for a CSV dataset.
    Analyze(AnalyzeArgs),
    /// Competing Bayes factors.
    #[command(subcommand)]
    Baselines(BaselineCommand),
    /// Operating-characteristic simulation from a JSON or TOML scenario.
    Simulate(SimulateArgs),
    /// The rapid-resumption analysis (t = -0.06, n = 40, p = 2).
    Example(ExampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, requires = "data")]
    pub response: Option<String>,
    #[arg(long, requires = "data")]
    pub target: Option<String>,
    /// Comma-separated conditioning columns (default: all others).
    #[arg(long, requires = "data", value_delimiter = ',')]
    pub conditioning: Option<Vec<String>>,
}

impl DataArgs {
    fn load(&self) -> Result<DataMatrix> {
        let path = self.data.as_ref().ok_or_else(|| Error::Input("--data is required".into()))?;
        let response = self
            .response
            .as_deref()
            .ok_or_else(|| Error::Input("--response is required with --data".into()))?;
        let target = self
            .target
            .as_deref()
            .ok_or_else(|| Error::Input("--target is required with --data".into()))?;
        let file = File::open(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        DataMatrix::from_csv(file, response, target, self.conditioning.as_deref())
    }
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    #[arg(long, default_value_t = Branch::Symmetric)]
    pub branch: Branch,
    #[arg(long, default_value_t = -0.99, allow_hyphen_values = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 0.99, allow_hyphen_values = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 199)]
    pub grid_count: usize,
    /// Plain equal-mass rule; skip refinement of under-resolved bins.
    #[arg(long)]
    pub no_refine: bool,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["r", "data"])]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "data")]
    pub r: Option<f64>,
    #[arg(long, conflicts_with = "data")]
    pub n: Option<usize>,
    #[arg(long, conflicts_with = "data")]
    pub p: Option<usize>,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Output file; defaults to bff_curve.<format> in $BFFPC_OUT_DIR when set.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum BaselineCommand {
    /// Stretched-beta(α, α) prior on the partial correlation.
    StretchedBeta {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long)]
        n: usize,
        /// Number of conditioning variables.
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Monte Carlo JZS regression Bayes factor.
    Jzs {
        #[arg(long)]
        r2_null: f64,
        #[arg(long)]
        r2_full: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p0: usize,
        #[arg(long)]
        p1: usize,
        #[arg(long, default_value_t = 100_000)]
        mc_samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file (.json or .toml).
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub nuisance_corr: Option<f64>,
    /// Directory for oc_records.csv and oc_aggregates.csv.
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[command(flatten)]
    pub quad: QuadArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch<W: Write>(cmd: Command, out: &mut W) -> Result<()> {
    match cmd {
        Command::Curve(a) => cmd_curve(&a, out),
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Baselines(b) => cmd_baselines(&b, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Example(a) => cmd_example(&a, out),
    }
}

fn curve_for(summary: &TestSummary, q: &QuadArgs) -> Result<BffCurve> {
    if !(q.grid_min > -1.0 && q.grid_max < 1.0 && q.grid_min < q.grid_max) || q.grid_count < 2 {
        return Err(Error::Input(format!(
            "grid must satisfy -1 < min < max < 1 with count >= 2 (got {}, {}, {})",
            q.grid_min, q.grid_max, q.grid_count
        )));
    }
    let grid = rho_grid(q.grid_min, q.grid_max, q.grid_count);
    let mut config = QuadratureConfig::new(q.bins, q.branch)?;
    config.refine = !q.no_refine;
    bff_curve_with(summary, &grid, q.nu, config)
}

fn write_curve(curve: &BffCurve, output: Option<&Path>, format: Format, out: &mut impl Write) -> Result<()> {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let path = match output {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("bff_curve.{ext}"))),
    };
    let Some(path) = path else { return Ok(()) };
    let mut w = BufWriter::new(File::create(&path)?);
    match format {
        Format::Csv => curve.write_csv(&mut w)?,
        Format::Json => writeln!(w, "{}", curve.to_json()?)?,
    }
    w.flush()?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

fn print_crossings(curve: &BffCurve, out: &mut impl Write) -> Result<()> {
    for level in [-2.0, -3.0] {
        match curve.first_positive_crossing(level) {
            Some(r) => {
                let neg = curve.crossings(level).into_iter().filter(|&x| x < 0.0).reduce(f64::max);
                let neg = neg.map_or("none".to_string(), |v| format!("{v:.4}"));
                writeln!(out, "log BF10 = {level}: crossed at rho* = {r:.4} (negative side {neg})")?
            }
            None => writeln!(out, "log BF10 = {level}: not crossed on grid")?,
        }
    }
    Ok(())
}

fn cmd_curve(a: &CurveArgs, out: &mut impl Write) -> Result<()> {
    let summary = if a.data.data.is_some() {
        let d = a.data.load()?;
        let s = sufficient_stats(&d)?;
        t_statistic(partial_corr_mle(&s)?, d.n(), d.p())?
    } else {
        let (n, p) = match (a.n, a.p) {
            (Some(n), Some(p)) => (n, p),
            _ => return Err(Error::Input("--n and --p are required with --t or --r".into())),
        };
        match (a.t, a.r) {
            (Some(t), None) => TestSummary::new(t, n, p)?,
            (None, Some(r)) => {
                let r = PartialCorr::new(r).map_err(|e| Error::Input(e.to_string()))?;
                t_statistic(r, n, p)?
            }
            _ => return Err(Error::Input("give exactly one of --t, --r or --data".into())),
        }
    };
    let curve = curve_for(&summary, &a.quad)?;
    let df = summary.df() as f64;
    writeln!(out, "t = {}, n = {}, p = {}, df = {}", summary.t1, summary.n, summary.p, summary.df())?;
    writeln!(out, "two-sided p-value = {}", student_t_two_sided_p(summary.t1, df)?)?;
    print_crossings(&curve, out)?;
    write_curve(&curve, a.output.as_deref(), a.format, out)
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    n: usize,
    p: usize,
    r: f64,
    t: f64,
    df: usize,
    p_value: f64,
    fisher_z: f64,
    warning: Option<String>,
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut impl Write) -> Result<()> {
    let d = a.data.load()?;
    let s = sufficient_stats(&d)?;
    let r = partial_corr_mle(&s)?;
    let (n, p) = (d.n(), d.p());
    let df = n - p - 1;
    let report = match t_statistic(r, n, p) {
        Ok(ts) => AnalyzeReport {
            n,
            p,
            r: r.value(),
            t: ts.t1,
            df,
            p_value: student_t_two_sided_p(ts.t1, df as f64)?,
            fisher_z: fisher_z(r)?,
            warning: None,
        },
        Err(Error::InfiniteStatistic) => AnalyzeReport {
            n,
            p,
            r: r.value(),
            t: r.value().signum() * f64::INFINITY,
            df,
            p_value: 0.0,
            fisher_z: r.value().signum() * f64::INFINITY,
            warning: Some("|r*| = 1: the t statistic is infinite".into()),
        },
        Err(e) => return Err(e),
    };
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(out, "n = {}", report.n)?;
        writeln!(out, "p = {}", report.p)?;
        writeln!(out, "target = {}", d.names()[d.target()])?;
        writeln!(out, "r* = {}", report.r)?;
        writeln!(out, "t = {}", report.t)?;
        writeln!(out, "df = {}", report.df)?;
        writeln!(out, "p-value = {}", report.p_value)?;
        writeln!(out, "fisher z = {}", report.fisher_z)?;
    }
    Ok(())
}

fn cmd_baselines(b: &BaselineCommand, out: &mut impl Write) -> Result<()> {
    match *b {
        BaselineCommand::StretchedBeta { r, n, k, alpha } => {
            let r = PartialCorr::new(r).map_err(|e| Error::Input(e.to_string()))?;
            writeln!(out, "stretched-beta log BF10 = {}", stretched_beta_log_bf(r, n, k, alpha)?)?;
        }
        BaselineCommand::Jzs {
            r2_null,
            r2_full,
            n,
            p0,
            p1,
            mc_samples,
            seed,
        } => {
            let input = JzsInput {
                r2_null,
                r2_full,
                n,
                p0,
                p1,
                mc_samples,
                seed,
            };
            writeln!(out, "jzs log BF10 = {}", jzs_log_bf(&input)?)?;
            writeln!(out, "monte carlo se = {}", jzs_log_bf_std_error(&input)?)?;
        }
    }
    Ok(())
}

fn load_scenario(path: &Path) -> Result<SimScenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("toml") => SimScenario::from_toml(&text),
        Some("json") => SimScenario::from_json(&text),
        _ => Err(Error::Input("scenario file must end in .json or .toml".into())),
    }
}

fn cmd_simulate(a: &SimulateArgs, out: &mut impl Write) -> Result<()> {
    let mut scn = load_scenario(&a.config)?;
    if let Some(v) = a.replicates {
        scn.replicates = v;
    }
    if let Some(v) = a.seed {
        scn.seed = v;
    }
    if let Some(v) = a.bins {
        scn.bins = v;
    }
    if let Some(v) = a.nuisance_corr {
        scn.nuisance_corr = v;
    }
    let res = run_oc(&scn)?;
    std::fs::create_dir_all(&a.out_dir)?;
    let rec_path = a.out_dir.join("oc_records.csv");
    let agg_path = a.out_dir.join("oc_aggregates.csv");
    res.write_records_csv(BufWriter::new(File::create(&rec_path)?))?;
    res.write_aggregates_csv(BufWriter::new(File::create(&agg_path)?))?;
    for s in res.summaries() {
        writeln!(out, "{}", s.line())?;
    }
    writeln!(out, "wrote {} and {}", rec_path.display(), agg_path.display())?;
    Ok(())
}

/// Embedded summary of the rapid-resumption study.
pub const EXAMPLE_T: f64 = -0.06;
pub const EXAMPLE_N: usize = 40;
pub const EXAMPLE_P: usize = 2;

fn cmd_example(a: &ExampleArgs, out: &mut impl Write) -> Result<()> {
    let summary = TestSummary::new(EXAMPLE_T, EXAMPLE_N, EXAMPLE_P)?;
    let df = summary.df() as f64;
    let curve = curve_for(&summary, &a.quad)?;
    let r = summary.r();
    writeln!(out, "rapid resumption: partial correlation of resumption and age group, controlling for age")?;
    writeln!(out, "t = {EXAMPLE_T}, df = {}, n = {EXAMPLE_N}, p = {EXAMPLE_P}", summary.df())?;
    writeln!(out, "r* = {r:.5}")?;
    writeln!(out, "two-sided p-value = {:.4}", student_t_two_sided_p(EXAMPLE_T, df)?)?;
    writeln!(out, "nu = {}, bins = {}, branch = {}", a.quad.nu, a.quad.bins, a.quad.branch)?;
    print_crossings(&curve, out)?;
    let (w_min, v_min) = curve
        .points
        .iter()
        .map(|pt| (pt.rho_mode, pt.log_bf10))
        .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    writeln!(out, "strongest evidence for H0: log BF10 = {v_min:.4} at rho* = {w_min:.4}")?;
    let rr = PartialCorr::new(r)?;
    for k in [1, 2] {
        writeln!(
            out,
            "stretched-beta(0.5) log BF10, k = {k}: {:.4}",
            stretched_beta_log_bf(rr, EXAMPLE_N, k, 0.5)?
        )?;
    }
    writeln!(
        out,
        "published stretched-beta evidence for H0: 2.5 (log scale); the (n, k) mapping used for it is not stated"
    )?;
    writeln!(
        out,
        "published JZS log BF10: -2.04; its R² inputs are not published, see `baselines jzs`"
    )?;
    write_curve(&curve, a.output.as_deref(), a.format, out)
}
