//! Offline labeled corpus built from the bundled abstract set. Each half of
//! the set trains a trigram model whose samples become the AI side, while the
//! other half supplies held-out human abstracts.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Map;

use super::{CorpusError, Domain, LabeledRecord, Source, HUMAN_GENERATOR};
use crate::lm::{NGramConfig, NGramModel, SentenceSampler};
use crate::textproc::{detokenize, Lexicons, TokenizedDocument};
use crate::Label;

const BUNDLED: &str = include_str!("../../data/abstracts.jsonl");

pub const DESK_GENERATOR: &str = "trigram-lm";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeskAbstract {
    pub id: String,
    pub domain: Domain,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
}

/// The abstracts shipped with the crate, in file order.
pub fn bundled_abstracts() -> Vec<DeskAbstract> {
    parse_abstracts(BUNDLED).expect("bundled abstracts parse")
}

pub fn parse_abstracts(text: &str) -> Result<Vec<DeskAbstract>, CorpusError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CorpusError::Line {
                line: i + 1,
                source: Box::new(CorpusError::Json(e.to_string())),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeskConfig {
    pub lm: NGramConfig,
    pub seed: u64,
    /// Sampled sentences shorter than this are redrawn.
    pub min_sentence_words: usize,
    pub max_sentence_words: usize,
}

impl Default for DeskConfig {
    fn default() -> Self {
        Self {
            lm: NGramConfig::default(),
            seed: 42,
            min_sentence_words: 5,
            max_sentence_words: 60,
        }
    }
}

/// One half of the corpus: the model that produced its AI records, which is
/// also the model its records should be scored with.
#[derive(Debug, Clone)]
pub struct DeskFold {
    pub lm: NGramModel,
    pub records: Vec<LabeledRecord>,
}

fn record(id: String, a: &DeskAbstract, text: String, label: Label, generator: &str) -> LabeledRecord {
    LabeledRecord {
        id,
        source: Source::Other,
        domain: a.domain,
        title: a.title.clone(),
        abstract_text: text,
        label,
        generator: generator.to_string(),
        split: None,
        extra: Map::new(),
    }
}

/// Most frequent surface spelling of each lowercased word.
fn casing(docs: &[TokenizedDocument]) -> HashMap<String, String> {
    let mut counts: HashMap<String, HashMap<&str, usize>> = HashMap::new();
    for t in docs.iter().flat_map(|d| d.sentences.iter().flat_map(|s| s.iter().skip(1))) {
        *counts.entry(t.lower()).or_default().entry(&t.surface).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(lower, forms)| {
            let best = forms
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(a.0)))
                .map(|(s, _)| s.to_string())
                .unwrap_or_else(|| lower.clone());
            (lower, best)
        })
        .collect()
}

fn render(words: &[String], case: &HashMap<String, String>) -> String {
    let mut surfaces: Vec<String> = words
        .iter()
        .map(|w| case.get(w).cloned().unwrap_or_else(|| w.clone()))
        .collect();
    if let Some(first) = surfaces.first_mut() {
        let mut chars = first.chars();
        if let Some(c) = chars.next() {
            *first = c.to_uppercase().chain(chars).collect();
        }
    }
    if !matches!(surfaces.last().map(String::as_str), Some("." | "!" | "?")) {
        surfaces.push(".".into());
    }
    detokenize(surfaces.iter().map(String::as_str))
}

fn sample_abstract<R: Rng>(
    sampler: &SentenceSampler,
    case: &HashMap<String, String>,
    sentences: usize,
    config: &DeskConfig,
    rng: &mut R,
) -> String {
    let mut out = Vec::with_capacity(sentences);
    for _ in 0..sentences.max(1) {
        let mut best = Vec::new();
        for _ in 0..50 {
            let s = sampler.sample_sentence(rng, config.max_sentence_words);
            let words = s.iter().filter(|w| w.chars().any(char::is_alphanumeric)).count();
            if words >= config.min_sentence_words {
                best = s;
                break;
            }
            if s.len() > best.len() {
                best = s;
            }
        }
        if !best.is_empty() {
            out.push(render(&best, case));
        }
    }
    out.join(" ")
}

/// Builds two folds from `abstracts`. The set is shuffled with the seed and
/// split in half within each domain. Fold `k` trains a model on half `k`,
/// samples one AI abstract per abstract in that half (same title, same
/// sentence count) and adds every abstract of the other half as a human
/// record. The result has twice as many records as inputs, balanced by label.
pub fn build_desk_corpus(
    abstracts: &[DeskAbstract],
    lex: &Lexicons,
    config: &DeskConfig,
) -> Result<[DeskFold; 2], CorpusError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut halves: [Vec<&DeskAbstract>; 2] = [Vec::new(), Vec::new()];
    for domain in [Domain::Bio, Domain::Cs] {
        let mut group: Vec<&DeskAbstract> = abstracts.iter().filter(|a| a.domain == domain).collect();
        group.shuffle(&mut rng);
        for (i, a) in group.into_iter().enumerate() {
            halves[i % 2].push(a);
        }
    }
    if halves.iter().any(Vec::is_empty) {
        return Err(CorpusError::TooFewRecords {
            ai: halves[0].len(),
            human: halves[1].len(),
        });
    }

    let build = |k: usize, seed: u64| -> Result<DeskFold, CorpusError> {
        let docs: Vec<TokenizedDocument> = halves[k]
            .iter()
            .map(|a| TokenizedDocument::new(&a.title, &a.abstract_text, lex))
            .collect();
        let lm = NGramModel::train(&docs, config.lm)?;
        let case = casing(&docs);
        let sampler = SentenceSampler::new(&lm);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut records = Vec::with_capacity(halves[0].len() + halves[1].len());
        for (a, doc) in halves[k].iter().zip(&docs) {
            let text = sample_abstract(&sampler, &case, doc.sentences.len(), config, &mut rng);
            records.push(record(format!("ai-{}", a.id), a, text, Label::Ai, DESK_GENERATOR));
        }
        for a in &halves[1 - k] {
            records.push(record(
                format!("hu-{}", a.id),
                a,
                a.abstract_text.clone(),
                Label::Human,
                HUMAN_GENERATOR,
            ));
        }
        Ok(DeskFold { lm, records })
    };
    let seeds: [u64; 2] = [rng.gen(), rng.gen()];
    Ok([build(0, seeds[0])?, build(1, seeds[1])?])
}
