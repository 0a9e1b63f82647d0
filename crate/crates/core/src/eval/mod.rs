//! Classification metrics and regression reports.

mod metrics;
mod report;

pub use metrics::{confusion, f1_score, prf, ClassMetrics, ConfusionMatrix, EvalError, Prf};
pub use report::{classification_table, CoefficientEntry, ModelSummary, RegressionReport};
