use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::collinear::{prune_collinear, PruneLimits, Removal, Standardizer};
use super::linalg::Matrix;
use super::logistic::{fit_logistic, sigmoid};
use super::special::{chi_square_sf, two_sided_p};
use super::DetectorError;
use crate::features::{FeatureGroup, FeatureRow, FeatureVector, FEATURE_NAMES};
use crate::Label;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Which perspective a model is fitted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelGroup {
    Syntax,
    Semantics,
    Pragmatics,
    All,
}

impl ModelGroup {
    /// Report column order.
    pub const ALL: [ModelGroup; 4] = [
        ModelGroup::Syntax,
        ModelGroup::Semantics,
        ModelGroup::Pragmatics,
        ModelGroup::All,
    ];

    pub fn columns(self) -> std::ops::Range<usize> {
        match self {
            ModelGroup::Syntax => FeatureGroup::Syntax.range(),
            ModelGroup::Semantics => FeatureGroup::Semantics.range(),
            ModelGroup::Pragmatics => FeatureGroup::Pragmatics.range(),
            ModelGroup::All => 0..FEATURE_NAMES.len(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelGroup::Syntax => "syntax",
            ModelGroup::Semantics => "semantics",
            ModelGroup::Pragmatics => "pragmatics",
            ModelGroup::All => "all",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ModelGroup::Syntax => "Only Syntax",
            ModelGroup::Semantics => "Only Semantics",
            ModelGroup::Pragmatics => "Only Pragmatics",
            ModelGroup::All => "All",
        }
    }
}

impl fmt::Display for ModelGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelGroup::ALL
            .into_iter()
            .find(|g| g.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown group {s:?} (expected syntax, semantics, pragmatics or all)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub ridge: f64,
    pub limits: PruneLimits,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            ridge: 0.0,
            limits: PruneLimits::default(),
        }
    }
}

/// A fitted, standardized logistic detector with its diagnostics. The
/// modelled probability is that of the human-written class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogitModel {
    pub version: u32,
    pub group: ModelGroup,
    pub feature_names: Vec<String>,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub beta: Vec<f64>,
    pub intercept: f64,
    pub intercept_se: f64,
    pub ll: f64,
    pub ll_null: f64,
    pub pseudo_r2: f64,
    pub se: Vec<f64>,
    pub p_values: Vec<f64>,
    pub llr_p: f64,
    pub n_obs: usize,
    pub df_residuals: usize,
    pub ridge: f64,
    pub ridge_fallback: bool,
    pub iterations: usize,
    pub pruning: Vec<Removal>,
}

/// `1 - ll / ll_null`.
pub fn mcfadden_pseudo_r2(ll: f64, ll_null: f64) -> Result<f64, DetectorError> {
    if !(ll_null < 0.0) || !ll.is_finite() || ll < ll_null || ll > 0.0 {
        return Err(DetectorError::BadLikelihoods { ll, ll_null });
    }
    Ok(1.0 - ll / ll_null)
}

/// Likelihood-ratio test of the fitted model against the null: the
/// upper chi-square tail of `2 (ll - ll_null)` with `df` degrees of freedom.
pub fn llr_test(ll: f64, ll_null: f64, df: usize) -> Result<f64, DetectorError> {
    if !(ll_null < 0.0) || !ll.is_finite() || ll < ll_null || df == 0 {
        return Err(DetectorError::BadLikelihoods { ll, ll_null });
    }
    Ok(chi_square_sf(2.0 * (ll - ll_null), df))
}

/// Two-sided Wald p-values `2 (1 - Phi(|beta / se|))`.
pub fn wald_pvalues(beta: &[f64], se: &[f64]) -> Result<Vec<f64>, DetectorError> {
    beta.iter()
        .zip(se)
        .map(|(&b, &s)| {
            if !(s > 0.0 && s.is_finite()) {
                return Err(DetectorError::SingularInformation);
            }
            Ok(two_sided_p(b / s))
        })
        .collect()
}

/// Significance marker: `***` below 0.01, `**` below 0.05, `*` below 0.1.
pub fn stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.1 {
        "*"
    } else {
        ""
    }
}

/// Prunes, standardizes and fits one model on raw feature columns.
pub fn fit_design(
    x: &Matrix,
    names: &[String],
    labels: &[Label],
    group: ModelGroup,
    options: FitOptions,
) -> Result<LogitModel, DetectorError> {
    if x.len() != labels.len() {
        return Err(DetectorError::LengthMismatch {
            rows: x.len(),
            labels: labels.len(),
        });
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(DetectorError::NonFinite);
    }
    if x.len() < names.len() + 1 {
        return Err(DetectorError::TooFewRows {
            rows: x.len(),
            needed: names.len() + 1,
        });
    }
    let pruning = prune_collinear(x, names, options.limits)?;
    let kept: Matrix = x
        .iter()
        .map(|r| pruning.retained.iter().map(|&j| r[j]).collect())
        .collect();
    let scaler = Standardizer::fit(&kept)?;
    let z = scaler.transform(&kept);
    let y: Vec<f64> = labels.iter().map(|l| l.as_f64()).collect();
    let fit = fit_logistic(&z, &y, options.ridge)?;

    let se: Vec<f64> = (1..=fit.beta.len())
        .map(|k| fit.covariance[k][k].sqrt())
        .collect();
    let p_values = wald_pvalues(&fit.beta, &se)?;
    let k = fit.beta.len();
    Ok(LogitModel {
        version: MODEL_FORMAT_VERSION,
        group,
        feature_names: pruning.retained.iter().map(|&j| names[j].clone()).collect(),
        means: scaler.means,
        stds: scaler.stds,
        intercept: fit.intercept,
        intercept_se: fit.covariance[0][0].sqrt(),
        pseudo_r2: mcfadden_pseudo_r2(fit.ll, fit.ll_null)?,
        llr_p: llr_test(fit.ll, fit.ll_null, k)?,
        ll: fit.ll,
        ll_null: fit.ll_null,
        beta: fit.beta,
        se,
        p_values,
        n_obs: x.len(),
        df_residuals: x.len() - k - 1,
        ridge: fit.ridge,
        ridge_fallback: fit.ridge_fallback,
        iterations: fit.iterations,
        pruning: pruning.log,
    })
}

/// Fits one perspective's model on featurized rows.
pub fn fit_group(
    rows: &[FeatureRow],
    group: ModelGroup,
    options: FitOptions,
) -> Result<LogitModel, DetectorError> {
    let cols = group.columns();
    let names: Vec<String> = FEATURE_NAMES[cols.clone()].iter().map(|s| s.to_string()).collect();
    let x: Matrix = rows
        .iter()
        .map(|r| r.features.values[cols.clone()].to_vec())
        .collect();
    let labels: Vec<Label> = rows.iter().map(|r| r.label).collect();
    fit_design(&x, &names, &labels, group, options)
}

/// One model per requested group, all on the same observations.
pub fn fit_groups(
    rows: &[FeatureRow],
    groups: &[ModelGroup],
    options: FitOptions,
) -> Result<Vec<LogitModel>, DetectorError> {
    groups.iter().map(|&g| fit_group(rows, g, options)).collect()
}

/// Per-feature view of one prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contribution {
    pub feature: String,
    pub value: f64,
    pub standardized: f64,
    /// `beta * standardized`: the feature's push on the log-odds of human.
    pub contribution: f64,
}

impl LogitModel {
    fn standardized<F>(&self, lookup: F) -> Result<Vec<f64>, DetectorError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        self.feature_names
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let v = lookup(name).ok_or_else(|| DetectorError::MissingFeature(name.clone()))?;
                Ok((v - self.means[j]) / self.stds[j])
            })
            .collect()
    }

    /// Probability of the human class for values looked up by name.
    pub fn predict_with<F>(&self, lookup: F) -> Result<f64, DetectorError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        let z = self.standardized(lookup)?;
        let t = self.intercept + self.beta.iter().zip(&z).map(|(b, x)| b * x).sum::<f64>();
        Ok(sigmoid(t))
    }

    pub fn predict_proba(&self, features: &FeatureVector) -> Result<f64, DetectorError> {
        self.predict_with(|name| features.get(name))
    }

    pub fn predict_label(&self, features: &FeatureVector) -> Result<Label, DetectorError> {
        self.predict_proba(features).map(Label::from_probability)
    }

    pub fn predict_batch(&self, rows: &[FeatureRow]) -> Result<Vec<f64>, DetectorError> {
        rows.par_iter().map(|r| self.predict_proba(&r.features)).collect()
    }

    /// Contributions sorted by absolute size, largest first.
    pub fn contributions(&self, features: &FeatureVector) -> Result<Vec<Contribution>, DetectorError> {
        let z = self.standardized(|name| features.get(name))?;
        let mut out: Vec<Contribution> = self
            .feature_names
            .iter()
            .enumerate()
            .map(|(j, name)| Contribution {
                feature: name.clone(),
                value: features.get(name).unwrap_or(f64::NAN),
                standardized: z[j],
                contribution: self.beta[j] * z[j],
            })
            .collect();
        out.sort_by(|a, b| b.contribution.abs().total_cmp(&a.contribution.abs()));
        Ok(out)
    }

    pub fn coefficient(&self, name: &str) -> Option<(f64, f64)> {
        self.feature_names
            .iter()
            .position(|n| n == name)
            .map(|j| (self.beta[j], self.p_values[j]))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, DetectorError> {
        let model: Self =
            serde_json::from_str(text).map_err(|e| DetectorError::Format(e.to_string()))?;
        if model.version != MODEL_FORMAT_VERSION {
            return Err(DetectorError::Format(format!(
                "unsupported model version {}",
                model.version
            )));
        }
        let k = model.feature_names.len();
        if [model.means.len(), model.stds.len(), model.beta.len(), model.se.len(), model.p_values.len()]
            .iter()
            .any(|&len| len != k)
        {
            return Err(DetectorError::Format("per-feature arrays disagree in length".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), DetectorError> {
        std::fs::write(path, self.to_json()).map_err(|e| DetectorError::Io(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, DetectorError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DetectorError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FEATURE_COUNT;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn published_pseudo_r2() {
        let cases = [(-385.28, 0.861), (-1437.1, 0.4814), (-474.99, 0.8286), (-172.24, 0.9378)];
        for (ll, expected) in cases {
            let r2 = mcfadden_pseudo_r2(ll, -2771.1).unwrap();
            assert!((r2 - expected).abs() < 5e-4, "{ll}: {r2}");
        }
        assert_eq!(mcfadden_pseudo_r2(-10.0, -10.0).unwrap(), 0.0);
        assert!(mcfadden_pseudo_r2(-20.0, -10.0).is_err());
        assert!(mcfadden_pseudo_r2(-1.0, 0.0).is_err());
        assert!(mcfadden_pseudo_r2(-5.0, -10.0).unwrap() < mcfadden_pseudo_r2(-4.0, -10.0).unwrap());
    }

    #[test]
    fn llr_examples() {
        assert_eq!(llr_test(-5.0, -5.0, 3).unwrap(), 1.0);
        assert!((llr_test(-10.0 + 3.841 / 2.0, -10.0, 1).unwrap() - 0.05).abs() < 1e-4);
        assert_eq!(llr_test(-385.28, -2771.1, 20).unwrap(), 0.0);
    }

    #[test]
    fn wald_and_stars() {
        assert_eq!(wald_pvalues(&[0.0], &[1.0]).unwrap(), vec![1.0]);
        assert!((wald_pvalues(&[1.959964], &[1.0]).unwrap()[0] - 0.05).abs() < 1e-6);
        assert_eq!(wald_pvalues(&[1.0], &[0.0]), Err(DetectorError::SingularInformation));
        assert_eq!(stars(0.08), "*");
        assert_eq!(stars(0.03), "**");
        assert_eq!(stars(0.004), "***");
        assert_eq!(stars(0.5), "");
        assert_eq!(stars(0.1), "");
    }

    fn hand_model() -> LogitModel {
        LogitModel {
            version: MODEL_FORMAT_VERSION,
            group: ModelGroup::All,
            feature_names: vec!["text_ppl".into(), "fw_the".into()],
            means: vec![10.0, 0.05],
            stds: vec![2.0, 0.01],
            beta: vec![1.5, -0.5],
            intercept: 0.25,
            intercept_se: 0.1,
            ll: -10.0,
            ll_null: -20.0,
            pseudo_r2: 0.5,
            se: vec![0.5, 0.5],
            p_values: vec![0.01, 0.3],
            llr_p: 0.0,
            n_obs: 30,
            df_residuals: 27,
            ridge: 0.0,
            ridge_fallback: false,
            iterations: 6,
            pruning: vec![],
        }
    }

    fn vector(pairs: &[(&str, f64)]) -> FeatureVector {
        let mut v = [0.0; FEATURE_COUNT];
        for (name, value) in pairs {
            v[crate::features::feature_index(name).unwrap()] = *value;
        }
        FeatureVector::new(v)
    }

    #[test]
    fn hand_prediction() {
        let m = hand_model();
        let fv = vector(&[("text_ppl", 13.0), ("fw_the", 0.03)]);
        // z = (1.5, -2) -> t = 0.25 + 2.25 + 1.0 = 3.5
        let expected = 1.0 / (1.0 + (-3.5f64).exp());
        assert!((m.predict_proba(&fv).unwrap() - expected).abs() < 1e-15);
        let at_means = vector(&[("text_ppl", 10.0), ("fw_the", 0.05)]);
        assert!((m.predict_proba(&at_means).unwrap() - sigmoid(0.25)).abs() < 1e-15);
        let c = m.contributions(&fv).unwrap();
        assert_eq!(c[0].feature, "text_ppl");
        assert!((c[0].contribution - 2.25).abs() < 1e-12);
    }

    #[test]
    fn null_coefficients_give_half() {
        let mut m = hand_model();
        m.beta = vec![0.0, 0.0];
        m.intercept = 0.0;
        assert_eq!(m.predict_proba(&vector(&[("text_ppl", 99.0)])).unwrap(), 0.5);
    }

    #[test]
    fn missing_feature() {
        let mut m = hand_model();
        m.feature_names[1] = "commonsense".into();
        assert_eq!(
            m.predict_proba(&vector(&[])),
            Err(DetectorError::MissingFeature("commonsense".into()))
        );
    }

    fn synthetic_rows(n: usize, seed: u64) -> Vec<FeatureRow> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let mut v = [0.0; FEATURE_COUNT];
                for x in v.iter_mut() {
                    *x = rng.gen::<f64>();
                }
                let t = 3.0 * (v[19] - 0.5) - 2.0 * (v[21] - 0.5) + 1.5 * (v[26] - 0.5);
                let human = rng.gen::<f64>() < sigmoid(t);
                FeatureRow {
                    id: format!("r{i}"),
                    label: if human { Label::Human } else { Label::Ai },
                    features: FeatureVector::new(v),
                }
            })
            .collect()
    }

    #[test]
    fn group_models_and_round_trip() {
        let rows = synthetic_rows(400, 2);
        let models = fit_groups(&rows, &ModelGroup::ALL, FitOptions::default()).unwrap();
        let all = &models[3];
        assert_eq!(all.feature_names.len(), 27);
        assert_eq!(all.df_residuals, 400 - 28);
        for m in &models[..3] {
            assert!(all.ll >= m.ll);
            assert!(m.ll >= m.ll_null);
            assert!((0.0..1.0).contains(&m.pseudo_r2));
            assert_eq!(m.beta.len(), m.se.len());
        }
        let (b, p) = all.coefficient("text_ppl").unwrap();
        assert!(b > 0.0 && p < 0.01);

        let back = LogitModel::from_json(&all.to_json()).unwrap();
        assert_eq!(&back, all);
        let a = all.predict_batch(&rows).unwrap();
        let b = back.predict_batch(&rows).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn version_checked() {
        let mut m = hand_model();
        m.version = 9;
        assert!(matches!(
            LogitModel::from_json(&m.to_json()),
            Err(DetectorError::Format(_))
        ));
    }
}
