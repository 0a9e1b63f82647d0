use std::collections::BTreeSet;

use super::embedding::EmbeddingProvider;
use super::semantic::{pairwise_cosines, sentence_vectors};
use super::FeatureError;
use crate::textproc::{Lexicons, Token, TokenizedDocument};

/// Crude suffix stripper so that inflected forms share a stem
/// ("converges", "converged", "converge" -> "converg").
pub(crate) fn light_stem(word: &str) -> String {
    let mut w = word.to_string();
    for suffix in ["ing", "ed", "es", "s"] {
        if w.ends_with(suffix) && !(suffix == "s" && w.ends_with("ss")) {
            let stem_len = w.len() - suffix.len();
            if stem_len >= 3 {
                w.truncate(stem_len);
                break;
            }
        }
    }
    if w.ends_with('e') && w.len() > 3 {
        w.pop();
    }
    w
}

fn content_words(sentence: &[Token], lex: &Lexicons) -> BTreeSet<String> {
    sentence
        .iter()
        .filter(|t| t.is_wordlike())
        .map(Token::lower)
        .filter(|w| !lex.is_function_word(w) && !lex.is_negation(w))
        .map(|w| light_stem(&w))
        .collect()
}

fn has_negation(sentence: &[Token], lex: &Lexicons) -> bool {
    sentence.iter().any(|t| lex.is_negation(&t.lower()))
}

fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// `(self_contradiction, redundancy)`.
///
/// Redundancy is the share of sentence pairs whose embedding cosine reaches
/// `redundancy_threshold`. Self-contradiction is, among pairs whose
/// content-word Jaccard reaches `overlap_threshold`, the share in which
/// exactly one sentence carries a negation cue.
pub fn pragmatics_features<E: EmbeddingProvider + ?Sized>(
    doc: &TokenizedDocument,
    emb: &E,
    lex: &Lexicons,
    redundancy_threshold: f64,
    overlap_threshold: f64,
) -> Result<(f64, f64), FeatureError> {
    if doc.sentences.is_empty() {
        return Err(FeatureError::EmptyDocument);
    }
    let sims = pairwise_cosines(&sentence_vectors(doc, emb));
    if sims.is_empty() {
        return Ok((0.0, 0.0));
    }
    let redundancy =
        sims.iter().filter(|&&s| s >= redundancy_threshold).count() as f64 / sims.len() as f64;

    let content: Vec<_> = doc.sentences.iter().map(|s| content_words(s, lex)).collect();
    let negated: Vec<bool> = doc.sentences.iter().map(|s| has_negation(s, lex)).collect();
    let (mut overlapping, mut contradicting) = (0usize, 0usize);
    for i in 0..content.len() {
        for j in i + 1..content.len() {
            if jaccard(&content[i], &content[j]) >= overlap_threshold {
                overlapping += 1;
                if negated[i] != negated[j] {
                    contradicting += 1;
                }
            }
        }
    }
    let contradiction = if overlapping == 0 {
        0.0
    } else {
        contradicting as f64 / overlapping as f64
    };
    Ok((contradiction, redundancy))
}
