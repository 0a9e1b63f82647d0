//! Interpretable logistic detector: standardization, collinearity pruning,
//! Newton-Raphson fitting and Wald / likelihood-ratio diagnostics.

mod collinear;
pub(crate) mod linalg;
mod logistic;
mod model;
pub mod special;

pub use collinear::{
    prune_collinear, standardize, vif, PruneLimits, Pruning, Removal, Standardizer, Trigger,
};
pub use logistic::{
    fit_logistic, gradient, log_likelihood, LogisticFit, FALLBACK_RIDGE, MAX_ITERATIONS, TOLERANCE,
};
pub use model::{
    fit_design, fit_group, fit_groups, llr_test, mcfadden_pseudo_r2, stars, wald_pvalues,
    Contribution, FitOptions, LogitModel, ModelGroup, MODEL_FORMAT_VERSION,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DetectorError {
    #[error("need at least {needed} rows, have {rows}")]
    TooFewRows { rows: usize, needed: usize },
    #[error("every column was pruned")]
    AllColumnsPruned,
    #[error("both labels must be present")]
    OneClassOnly,
    #[error("Newton-Raphson did not converge, even with the fallback ridge")]
    NoConvergence,
    #[error("observed information matrix is singular")]
    SingularInformation,
    #[error("invalid likelihoods ll={ll}, ll_null={ll_null}")]
    BadLikelihoods { ll: f64, ll_null: f64 },
    #[error("{rows} rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("design matrix contains NaN or infinite values")]
    NonFinite,
    #[error("input lacks feature {0:?}")]
    MissingFeature(String),
    #[error("model file: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(String),
}
