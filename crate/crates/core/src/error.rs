use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    /// An iterative method failed to converge or produced a non-finite value.
    #[error("numerical error in {func}: {msg}")]
    Numerical { func: &'static str, msg: String },

    /// Design matrix is rank deficient.
    #[error("singular design: {msg} (columns: {columns:?})")]
    Singular { msg: String, columns: Vec<String> },

    /// Target predictor is collinear with the conditioning set.
    #[error("degenerate design: {0}")]
    Degenerate(String),

    /// |r*| = 1 yields an infinite test statistic.
    #[error("infinite test statistic: |r*| = 1")]
    InfiniteStatistic,

    /// The hypergeometric kernel argument sits on the boundary x -> 1.
    #[error("boundary error: |rho * r| = {product} exceeds 1 - 1e-12")]
    Boundary { product: f64 },

    /// A correlation matrix is not positive definite.
    #[error("infeasible covariance: leading minor {minor} = {value:.3e} is not positive")]
    Infeasible { minor: usize, value: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("input error: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("toml: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            func,
            msg: msg.into(),
        }
    }

    pub(crate) fn numerical(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Numerical {
            func,
            msg: msg.into(),
        }
    }

    /// Process exit code for this error: 2 input, 3 numerical, 4 model/rank.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical { .. } | Error::Boundary { .. } => 3,
            Error::Singular { .. }
            | Error::Degenerate(_)
            | Error::InfiniteStatistic
            | Error::Infeasible { .. } => 4,
            Error::Domain { .. }
            | Error::Argument(_)
            | Error::Input(_)
            | Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_)
            | Error::Toml(_) => 2,
        }
    }
}
