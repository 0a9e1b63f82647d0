//! Smoothed n-gram language model, perplexity scoring and the
//! perplexity-threshold classifier.

mod ngram;
mod sample;
mod threshold;

pub use ngram::{lm_words, NGramConfig, NGramModel, BOS, EOS, UNK};
pub use sample::SentenceSampler;
pub use threshold::{
    calibrate_threshold, classify_by_perplexity, PerplexityThreshold, TextKind,
    REFERENCE_ABSTRACT_THRESHOLD, REFERENCE_WIKI_THRESHOLD,
};

use thiserror::Error;

use crate::textproc::TokenizedDocument;

#[derive(Debug, Error, PartialEq)]
pub enum LmError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("n-gram order must be at least 1, got {0}")]
    BadOrder(usize),
    #[error("smoothing constant must be positive and finite, got {0}")]
    BadAlpha(f64),
    #[error("document has no tokens to score")]
    EmptyDocument,
    #[error("calibration needs both labels")]
    OneClassOnly,
    #[error("calibration scores must be finite and positive")]
    BadScores,
    #[error("calibration has {scores} scores but {labels} labels")]
    LengthMismatch { scores: usize, labels: usize },
    #[error("model file: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(String),
}

/// Anything that can assign perplexities to documents. The n-gram model is
/// the built-in implementation; neural scorers can plug in here.
pub trait PerplexityScorer: Sync {
    fn text_perplexity(&self, doc: &TokenizedDocument) -> Result<f64, LmError>;
    fn avg_sentence_perplexity(&self, doc: &TokenizedDocument) -> Result<f64, LmError>;
}

/// Log probability of every body sentence scored independently, and the
/// number of scored positions.
pub fn document_log_prob(model: &NGramModel, doc: &TokenizedDocument) -> (f64, usize) {
    doc.sentences.iter().fold((0.0, 0), |(total, n), s| {
        let (lp, k) = model.sentence_log_prob(&lm_words(s));
        (total + lp, n + k)
    })
}

/// `exp(-log_prob / N)` where `N` counts words plus end markers.
pub fn text_perplexity(model: &NGramModel, doc: &TokenizedDocument) -> Result<f64, LmError> {
    let (total, n) = document_log_prob(model, doc);
    if n == 0 {
        return Err(LmError::EmptyDocument);
    }
    Ok((-total / n as f64).exp())
}

/// Arithmetic mean of the per-sentence perplexities.
pub fn avg_sentence_perplexity(model: &NGramModel, doc: &TokenizedDocument) -> Result<f64, LmError> {
    let per: Vec<f64> = doc
        .sentences
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (lp, k) = model.sentence_log_prob(&lm_words(s));
            (-lp / k as f64).exp()
        })
        .collect();
    if per.is_empty() {
        return Err(LmError::EmptyDocument);
    }
    Ok(per.iter().sum::<f64>() / per.len() as f64)
}

impl PerplexityScorer for NGramModel {
    fn text_perplexity(&self, doc: &TokenizedDocument) -> Result<f64, LmError> {
        text_perplexity(self, doc)
    }

    fn avg_sentence_perplexity(&self, doc: &TokenizedDocument) -> Result<f64, LmError> {
        avg_sentence_perplexity(self, doc)
    }
}
