use serde::{Deserialize, Serialize};

use super::{text_perplexity, LmError, NGramModel};
use crate::eval::{confusion, prf};
use crate::textproc::TokenizedDocument;
use crate::Label;

/// Published cut-off for scientific abstracts under a neural masked-LM
/// scorer. Kept for reference only; n-gram perplexities live on a
/// different scale and must be recalibrated.
pub const REFERENCE_ABSTRACT_THRESHOLD: f64 = 2.6;
/// Published cut-off for encyclopedia-style item descriptions.
pub const REFERENCE_WIKI_THRESHOLD: f64 = 4.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextKind {
    Abstract,
    Wiki,
    Other,
}

/// Decision rule "AI-generated if perplexity < threshold".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerplexityThreshold {
    pub threshold: f64,
    pub text_kind: TextKind,
    pub calibration_note: String,
    /// Macro-F1 on the calibration set, when calibrated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration_macro_f1: Option<f64>,
}

impl PerplexityThreshold {
    pub fn reference_abstract() -> Self {
        Self {
            threshold: REFERENCE_ABSTRACT_THRESHOLD,
            text_kind: TextKind::Abstract,
            calibration_note: "published reference value for abstracts (neural scorer scale)".into(),
            calibration_macro_f1: None,
        }
    }

    pub fn classify_score(&self, perplexity: f64) -> Label {
        if perplexity < self.threshold {
            Label::Ai
        } else {
            Label::Human
        }
    }
}

fn macro_f1_at(threshold: f64, scores: &[f64], labels: &[Label]) -> f64 {
    let preds: Vec<Label> = scores
        .iter()
        .map(|&s| if s < threshold { Label::Ai } else { Label::Human })
        .collect();
    prf(&confusion(&preds, labels).expect("lengths checked")).macro_f1
}

/// Midpoints between adjacent sorted scores, deduplicated, ascending.
pub(crate) fn candidate_thresholds(scores: &[f64]) -> Vec<f64> {
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = sorted.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    out.dedup();
    out
}

/// Picks the midpoint threshold that maximizes macro-F1 of the rule
/// "AI if score < t". Ties go to the smaller threshold.
pub fn calibrate_threshold(scores: &[f64], labels: &[Label]) -> Result<PerplexityThreshold, LmError> {
    if scores.len() != labels.len() {
        return Err(LmError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if !(labels.contains(&Label::Ai) && labels.contains(&Label::Human)) {
        return Err(LmError::OneClassOnly);
    }
    if scores.iter().any(|s| !s.is_finite() || *s <= 0.0) {
        return Err(LmError::BadScores);
    }
    let mut best: Option<(f64, f64)> = None;
    for t in candidate_thresholds(scores) {
        let f1 = macro_f1_at(t, scores, labels);
        if best.map_or(true, |(_, b)| f1 > b) {
            best = Some((t, f1));
        }
    }
    let (threshold, f1) = best.expect("at least two scores");
    Ok(PerplexityThreshold {
        threshold,
        text_kind: TextKind::Abstract,
        calibration_note: format!(
            "macro-F1 maximizing midpoint over {} calibration scores",
            scores.len()
        ),
        calibration_macro_f1: Some(f1),
    })
}

/// 0 (AI) if the document's perplexity is strictly below the threshold.
pub fn classify_by_perplexity(
    model: &NGramModel,
    th: &PerplexityThreshold,
    doc: &TokenizedDocument,
) -> Result<Label, LmError> {
    Ok(th.classify_score(text_perplexity(model, doc)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Label::{Ai, Human};

    #[test]
    fn separable_midpoint() {
        let th = calibrate_threshold(&[1.0, 2.0, 3.0, 4.0], &[Ai, Ai, Human, Human]).unwrap();
        assert_eq!(th.threshold, 2.5);
        assert_eq!(th.calibration_macro_f1, Some(1.0));
    }

    #[test]
    fn all_equal_scores() {
        let th = calibrate_threshold(&[3.0, 3.0, 3.0], &[Ai, Human, Ai]).unwrap();
        assert_eq!(th.threshold, 3.0);
        // nothing is below 3.0, so every prediction is human
        let expect = macro_f1_at(3.0, &[3.0; 3], &[Ai, Human, Ai]);
        assert_eq!(th.calibration_macro_f1, Some(expect));
    }

    #[test]
    fn one_class_rejected() {
        assert_eq!(
            calibrate_threshold(&[1.0, 2.0], &[Ai, Ai]),
            Err(LmError::OneClassOnly)
        );
    }

    #[test]
    fn published_rule_examples() {
        let th = PerplexityThreshold::reference_abstract();
        assert_eq!(th.classify_score(2.0), Ai);
        assert_eq!(th.classify_score(3.0), Human);
        assert_eq!(th.classify_score(2.6), Human);
    }

    #[test]
    fn tie_goes_to_smaller_threshold() {
        // t = 1.5 and t = 3.5 both reach macro-F1 (2/3 + 4/5) / 2
        let scores = [1.0, 2.0, 3.0, 4.0];
        let labels = [Ai, Human, Ai, Human];
        let th = calibrate_threshold(&scores, &labels).unwrap();
        assert_eq!(macro_f1_at(1.5, &scores, &labels), macro_f1_at(3.5, &scores, &labels));
        assert_eq!(th.threshold, 1.5);
    }

    proptest! {
        #[test]
        fn calibrated_threshold_is_optimal(
            pts in proptest::collection::vec((1.0f64..50.0, any::<bool>()), 2..40)
        ) {
            let scores: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let labels: Vec<Label> = pts.iter().map(|p| if p.1 { Human } else { Ai }).collect();
            prop_assume!(labels.contains(&Ai) && labels.contains(&Human));
            let th = calibrate_threshold(&scores, &labels).unwrap();
            let best = th.calibration_macro_f1.unwrap();
            // exhaustive re-sweep over every adjacent midpoint
            let mut sorted = scores.clone();
            sorted.sort_by(f64::total_cmp);
            for w in sorted.windows(2) {
                let t = (w[0] + w[1]) / 2.0;
                prop_assert!(macro_f1_at(t, &scores, &labels) <= best);
            }
        }
    }
}
