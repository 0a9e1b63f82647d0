//! The 27-feature framework: writing style, coherence, title consistency,
//! self-contradiction and redundancy.

mod embedding;
mod pragmatics;
mod semantic;
mod style;
mod table;
mod vector;

pub use embedding::{
    cosine, cosine_dense, embedding_words, EmbeddingModel, EmbeddingProvider, SparseVector,
};
pub use pragmatics::pragmatics_features;
pub use semantic::{coherence_features, consistency_features};
pub use style::{flesch_reading_ease, writing_style_features};
pub use table::{read_feature_csv, write_feature_csv, FeatureRow};
pub use vector::{
    feature_index, FeatureGroup, FeatureVector, FEATURE_COUNT, FEATURE_LABELS, FEATURE_NAMES,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::LabeledRecord;
use crate::lm::{LmError, NGramModel, PerplexityScorer};
use crate::textproc::{Lexicons, TokenizedDocument};

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("document has no word tokens")]
    EmptyDocument,
    #[error("title has no word tokens")]
    EmptyTitle,
    #[error("record {id}: {source}")]
    Record { id: String, source: Box<FeatureError> },
    #[error(transparent)]
    Lm(#[from] LmError),
    #[error("io: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Weight of the abstract's own unigram distribution in the title
    /// generation score.
    pub lambda: f64,
    pub redundancy_threshold: f64,
    pub overlap_threshold: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            lambda: 0.7,
            redundancy_threshold: 0.85,
            overlap_threshold: 0.5,
        }
    }
}

/// Everything needed to turn a title and abstract into a feature vector.
pub struct FeatureExtractor<'a, E: EmbeddingProvider + ?Sized = EmbeddingModel> {
    pub lm: &'a NGramModel,
    pub emb: &'a E,
    pub lex: &'a Lexicons,
    pub config: FeatureConfig,
}

impl<'a, E: EmbeddingProvider + ?Sized> FeatureExtractor<'a, E> {
    pub fn new(lm: &'a NGramModel, emb: &'a E, lex: &'a Lexicons) -> Self {
        Self {
            lm,
            emb,
            lex,
            config: FeatureConfig::default(),
        }
    }

    pub fn with_config(mut self, config: FeatureConfig) -> Self {
        self.config = config;
        self
    }

    pub fn document(&self, title: &str, abstract_text: &str) -> TokenizedDocument {
        TokenizedDocument::new(title, abstract_text, self.lex)
    }

    pub fn extract_document(&self, doc: &TokenizedDocument) -> Result<FeatureVector, FeatureError> {
        if doc.word_count() == 0 {
            return Err(FeatureError::EmptyDocument);
        }
        let text_ppl = self.lm.text_perplexity(doc)?;
        let sent_ppl = self.lm.avg_sentence_perplexity(doc)?;
        let style = writing_style_features(doc, text_ppl, sent_ppl)?;
        let (cos_title, gen_score) =
            consistency_features(doc, self.emb, self.lm, self.config.lambda)?;
        let (coh_avg, coh_std, coh_max) = coherence_features(doc, self.emb)?;
        let (contradiction, redundancy) = pragmatics_features(
            doc,
            self.emb,
            self.lex,
            self.config.redundancy_threshold,
            self.config.overlap_threshold,
        )?;

        let mut values = [0.0; FEATURE_COUNT];
        values[..20].copy_from_slice(&style);
        values[20..].copy_from_slice(&[
            cos_title,
            coh_avg,
            coh_std,
            coh_max,
            gen_score,
            contradiction,
            redundancy,
        ]);
        Ok(FeatureVector::new(values))
    }

    pub fn extract(&self, title: &str, abstract_text: &str) -> Result<FeatureVector, FeatureError> {
        self.extract_document(&self.document(title, abstract_text))
    }

    pub fn extract_record(&self, record: &LabeledRecord) -> Result<FeatureVector, FeatureError> {
        self.extract(&record.title, &record.abstract_text)
    }

    /// Featurizes records in parallel. Rows come back sorted by record id.
    pub fn featurize(&self, records: &[LabeledRecord]) -> Result<Vec<FeatureRow>, FeatureError> {
        let mut rows = records
            .par_iter()
            .map(|r| {
                self.extract_record(r)
                    .map(|features| FeatureRow {
                        id: r.id.clone(),
                        label: r.label,
                        features,
                    })
                    .map_err(|e| FeatureError::Record {
                        id: r.id.clone(),
                        source: Box::new(e),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(rows)
    }
}

/// Runs the full pipeline on one record with default settings.
pub fn assemble_feature_vector(
    record: &LabeledRecord,
    lm: &NGramModel,
    emb: &EmbeddingModel,
    lex: &Lexicons,
) -> Result<FeatureVector, FeatureError> {
    FeatureExtractor::new(lm, emb, lex).extract_record(record)
}
