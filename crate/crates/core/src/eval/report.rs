use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::Prf;
use crate::detector::{stars, LogitModel, ModelGroup, Removal};
use crate::features::{feature_index, FEATURE_LABELS, FEATURE_NAMES};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub feature: String,
    pub beta: f64,
    pub se: f64,
    pub p_value: f64,
    pub stars: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub group: ModelGroup,
    pub title: String,
    pub n_obs: usize,
    pub df_residuals: usize,
    pub pseudo_r2: f64,
    pub ll: f64,
    pub ll_null: f64,
    pub llr_p: f64,
    pub f1: Option<f64>,
    pub intercept: f64,
    pub ridge_fallback: bool,
    pub coefficients: Vec<CoefficientEntry>,
    pub pruned: Vec<Removal>,
}

/// Regression summary and coefficient table for a set of fitted models,
/// ordered Only Syntax, Only Semantics, Only Pragmatics, All. The text
/// rendering and the JSON form carry the same numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub models: Vec<ModelSummary>,
}

fn feature_label(name: &str) -> String {
    feature_index(name).map_or_else(|| name.to_string(), |i| FEATURE_LABELS[i].to_string())
}

fn fmt_p(p: f64) -> String {
    if p == 0.0 {
        "0".into()
    } else if p < 1e-4 {
        format!("{p:.3e}")
    } else {
        format!("{p:.4}")
    }
}

impl RegressionReport {
    /// `metrics` pairs a group name (as in `ModelGroup::as_str`) with held-out
    /// metrics; the macro F1 is shown.
    pub fn new(models: &[LogitModel], metrics: &[(String, Prf)]) -> Self {
        let mut sorted: Vec<&LogitModel> = models.iter().collect();
        sorted.sort_by_key(|m| m.group);
        let models = sorted
            .into_iter()
            .map(|m| ModelSummary {
                group: m.group,
                title: m.group.title().to_string(),
                n_obs: m.n_obs,
                df_residuals: m.df_residuals,
                pseudo_r2: m.pseudo_r2,
                ll: m.ll,
                ll_null: m.ll_null,
                llr_p: m.llr_p,
                f1: metrics
                    .iter()
                    .find(|(name, _)| name == m.group.as_str())
                    .map(|(_, prf)| prf.macro_f1),
                intercept: m.intercept,
                ridge_fallback: m.ridge_fallback,
                coefficients: m
                    .feature_names
                    .iter()
                    .enumerate()
                    .map(|(j, name)| CoefficientEntry {
                        feature: name.clone(),
                        beta: m.beta[j],
                        se: m.se[j],
                        p_value: m.p_values[j],
                        stars: stars(m.p_values[j]).to_string(),
                    })
                    .collect(),
                pruned: m.pruning.clone(),
            })
            .collect();
        Self { models }
    }

    /// Feature rows in canonical order, followed by any non-canonical names
    /// in order of first appearance.
    fn feature_rows(&self) -> Vec<String> {
        let mut rows: Vec<String> = FEATURE_NAMES
            .iter()
            .filter(|n| self.models.iter().any(|m| m.coefficients.iter().any(|c| c.feature == **n)))
            .map(|n| n.to_string())
            .collect();
        for m in &self.models {
            for c in &m.coefficients {
                if !rows.contains(&c.feature) {
                    rows.push(c.feature.clone());
                }
            }
        }
        rows
    }

    pub fn to_text(&self) -> String {
        let rows = self.feature_rows();
        let label_width = rows
            .iter()
            .map(|r| feature_label(r).chars().count())
            .chain(["Information".len(), "Intercept".len()])
            .max()
            .unwrap_or(0);
        let col = self
            .models
            .iter()
            .map(|m| m.title.len())
            .max()
            .unwrap_or(0)
            .max(12)
            + 2;

        let mut out = String::new();
        let line = |out: &mut String, label: &str, cells: Vec<String>| {
            let _ = write!(out, "{label:<label_width$}");
            for c in cells {
                let _ = write!(out, "{c:>col$}");
            }
            out.push('\n');
        };
        let rule = "-".repeat(label_width + col * self.models.len());

        out.push_str("Logistic regression models\n");
        out.push_str(&rule);
        out.push('\n');
        line(&mut out, "Information", self.models.iter().map(|m| m.title.clone()).collect());
        out.push_str(&rule);
        out.push('\n');
        let each = |f: &dyn Fn(&ModelSummary) -> String| self.models.iter().map(f).collect::<Vec<_>>();
        line(&mut out, "No. Observations", each(&|m| m.n_obs.to_string()));
        line(&mut out, "Df Residuals", each(&|m| m.df_residuals.to_string()));
        line(&mut out, "Pseudo R-square", each(&|m| format!("{:.4}", m.pseudo_r2)));
        line(&mut out, "Log-Likelihood", each(&|m| format!("{:.2}", m.ll)));
        line(&mut out, "LL-Null", each(&|m| format!("{:.2}", m.ll_null)));
        line(&mut out, "LLR p-value", each(&|m| fmt_p(m.llr_p)));
        line(
            &mut out,
            "F1-score",
            each(&|m| m.f1.map_or_else(|| "-".into(), |f| format!("{f:.4}"))),
        );
        out.push_str(&rule);
        out.push_str("\n\nCoefficients (standardized features; outcome = human-written)\n");
        out.push_str(&rule);
        out.push('\n');
        line(&mut out, "Feature", self.models.iter().map(|m| m.title.clone()).collect());
        out.push_str(&rule);
        out.push('\n');
        for name in &rows {
            let cells = each(&|m| {
                m.coefficients
                    .iter()
                    .find(|c| &c.feature == name)
                    .map_or_else(String::new, |c| format!("{:.4}{:<3}", c.beta, c.stars))
            });
            line(&mut out, &feature_label(name), cells);
        }
        line(&mut out, "Intercept", each(&|m| format!("{:.4}   ", m.intercept)));
        out.push_str(&rule);
        out.push_str("\nNote: * p < 0.1, ** p < 0.05, *** p < 0.01\n");

        for m in &self.models {
            if m.pruned.is_empty() && !m.ridge_fallback {
                continue;
            }
            let _ = write!(out, "\n{}:", m.title);
            if m.ridge_fallback {
                out.push_str(" fitted with fallback ridge (separation or singular fit).");
            }
            for r in &m.pruned {
                let why = match &r.trigger {
                    crate::detector::Trigger::ZeroVariance => "zero variance".to_string(),
                    crate::detector::Trigger::Correlation { partner, r } => {
                        format!("r = {r:.4} with {partner}")
                    }
                    crate::detector::Trigger::Vif { vif } => format!("VIF = {vif:.2}"),
                };
                let _ = write!(out, "\n  removed {} ({why})", r.feature);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Per-class precision, recall and F1 with support, plus macro totals.
pub fn classification_table(prf: &Prf) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<14}{:>10}{:>10}{:>10}{:>8}", "Type", "Precision", "Recall", "F1", "Number");
    let pct = |v: f64| format!("{:.1}%", v * 100.0);
    for (name, c) in [("AI-generated", &prf.ai), ("Human-written", &prf.human)] {
        let _ = writeln!(
            out,
            "{name:<14}{:>10}{:>10}{:>10}{:>8}",
            pct(c.precision),
            pct(c.recall),
            pct(c.f1),
            c.support
        );
    }
    let _ = writeln!(
        out,
        "{:<14}{:>10}{:>10}{:>10}{:>8}",
        "Total",
        pct(prf.macro_precision),
        pct(prf.macro_recall),
        pct(prf.macro_f1),
        prf.ai.support + prf.human.support
    );
    out
}
