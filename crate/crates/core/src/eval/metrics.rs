use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Label;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("{predictions} predictions but {labels} labels")]
    LengthMismatch { predictions: usize, labels: usize },
    #[error("nothing to evaluate")]
    Empty,
}

/// Two-class confusion counts. "Positive" is the AI class (label 0); the
/// human-class view is the same matrix with roles swapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// Counts with the human class as positive.
    pub fn mirrored(&self) -> ConfusionMatrix {
        ConfusionMatrix {
            tp: self.tn,
            fp: self.fn_,
            fn_: self.fp,
            tn: self.tp,
        }
    }

    pub fn accuracy(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            (self.tp + self.tn) as f64 / self.total() as f64
        }
    }
}

pub fn confusion(predictions: &[Label], labels: &[Label]) -> Result<ConfusionMatrix, EvalError> {
    if predictions.len() != labels.len() {
        return Err(EvalError::LengthMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    if labels.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &y) in predictions.iter().zip(labels) {
        match (p, y) {
            (Label::Ai, Label::Ai) => cm.tp += 1,
            (Label::Ai, Label::Human) => cm.fp += 1,
            (Label::Human, Label::Ai) => cm.fn_ += 1,
            (Label::Human, Label::Human) => cm.tn += 1,
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    /// Set when any ratio was 0/0 and reported as 0.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub ai: ClassMetrics,
    pub human: ClassMetrics,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
}

fn ratio(num: usize, den: usize, degenerate: &mut bool) -> f64 {
    if den == 0 {
        *degenerate = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

fn class_metrics(cm: &ConfusionMatrix) -> ClassMetrics {
    let mut degenerate = false;
    let precision = ratio(cm.tp, cm.tp + cm.fp, &mut degenerate);
    let recall = ratio(cm.tp, cm.tp + cm.fn_, &mut degenerate);
    if precision + recall == 0.0 {
        degenerate = true;
    }
    ClassMetrics {
        precision,
        recall,
        f1: f1_score(precision, recall),
        support: cm.tp + cm.fn_,
        degenerate,
    }
}

/// Per-class and macro-averaged precision, recall and F1.
pub fn prf(cm: &ConfusionMatrix) -> Prf {
    let ai = class_metrics(cm);
    let human = class_metrics(&cm.mirrored());
    Prf {
        ai,
        human,
        macro_precision: (ai.precision + human.precision) / 2.0,
        macro_recall: (ai.recall + human.recall) / 2.0,
        macro_f1: (ai.f1 + human.f1) / 2.0,
        accuracy: cm.accuracy(),
    }
}
