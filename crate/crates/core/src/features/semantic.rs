use std::collections::HashMap;

use super::embedding::{cosine, embedding_words, EmbeddingProvider, SparseVector};
use super::FeatureError;
use crate::lm::NGramModel;
use crate::textproc::TokenizedDocument;

pub(crate) fn sentence_vectors<E: EmbeddingProvider + ?Sized>(
    doc: &TokenizedDocument,
    emb: &E,
) -> Vec<SparseVector> {
    doc.sentences
        .iter()
        .map(|s| emb.embed(&embedding_words(s)))
        .collect()
}

pub(crate) fn pairwise_cosines(vectors: &[SparseVector]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            out.push(cosine(&vectors[i], &vectors[j]));
        }
    }
    out
}

/// Mean, population standard deviation and maximum of the cosine similarity
/// over all unordered sentence pairs. A one-sentence document yields
/// `(1, 0, 1)`.
pub fn coherence_features<E: EmbeddingProvider + ?Sized>(
    doc: &TokenizedDocument,
    emb: &E,
) -> Result<(f64, f64, f64), FeatureError> {
    if doc.sentences.is_empty() {
        return Err(FeatureError::EmptyDocument);
    }
    let sims = pairwise_cosines(&sentence_vectors(doc, emb));
    if sims.is_empty() {
        return Ok((1.0, 0.0, 1.0));
    }
    let n = sims.len() as f64;
    let mean = sims.iter().sum::<f64>() / n;
    let var = sims.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    let max = sims.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((mean, var.sqrt(), max))
}

/// Title/abstract relations: the mean cosine between the title and each
/// sentence, and the mean per-token log probability of the title under
/// `lambda * P_doc + (1 - lambda) * P_background`.
///
/// `P_doc` is an add-alpha unigram over the abstract's word-like tokens,
/// sharing the language model's alpha and vocabulary size; `P_background`
/// is the language model's own smoothed unigram distribution.
pub fn consistency_features<E: EmbeddingProvider + ?Sized>(
    doc: &TokenizedDocument,
    emb: &E,
    lm: &NGramModel,
    lambda: f64,
) -> Result<(f64, f64), FeatureError> {
    let title = embedding_words(&doc.title_tokens);
    if title.is_empty() {
        return Err(FeatureError::EmptyTitle);
    }
    if doc.sentences.is_empty() {
        return Err(FeatureError::EmptyDocument);
    }
    let title_vec = emb.embed(&title);
    let sentence_vecs = sentence_vectors(doc, emb);
    let cos_title = sentence_vecs.iter().map(|s| cosine(&title_vec, s)).sum::<f64>()
        / sentence_vecs.len() as f64;

    let mut counts: HashMap<String, usize> = HashMap::new();
    let mut n_doc = 0usize;
    for s in &doc.sentences {
        for w in embedding_words(s) {
            *counts.entry(w).or_default() += 1;
            n_doc += 1;
        }
    }
    let alpha = lm.alpha();
    let v = lm.vocab_size() as f64;
    let gen_score = title
        .iter()
        .map(|w| {
            let c = counts.get(w).copied().unwrap_or(0) as f64;
            let p_doc = (c + alpha) / (n_doc as f64 + alpha * v);
            let p_bg = lm.unigram_prob(w);
            (lambda * p_doc + (1.0 - lambda) * p_bg).ln()
        })
        .sum::<f64>()
        / title.len() as f64;
    Ok((cos_title, gen_score))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::EmbeddingModel;
    use crate::lm::NGramConfig;
    use crate::textproc::Lexicons;

    fn lex() -> Lexicons {
        Lexicons::embedded()
    }

    fn emb() -> EmbeddingModel {
        let docs: Vec<Vec<String>> = [
            "neural models learn text",
            "cells divide rapidly",
            "we study protein folding",
            "graphs encode relations",
        ]
        .iter()
        .map(|s| s.split_whitespace().map(str::to_string).collect())
        .collect();
        EmbeddingModel::build(&docs)
    }

    fn doc(title: &str, body: &str) -> TokenizedDocument {
        TokenizedDocument::new(title, body, &lex())
    }

    #[test]
    fn identical_pair() {
        let d = doc("", "Neural models learn text. Neural models learn text.");
        let (avg, std, max) = coherence_features(&d, &emb()).unwrap();
        assert!((avg - 1.0).abs() < 1e-12 && std.abs() < 1e-12 && (max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_pair() {
        let d = doc("", "Neural models learn text. Cells divide rapidly.");
        assert_eq!(coherence_features(&d, &emb()).unwrap(), (0.0, 0.0, 0.0));
    }

    #[test]
    fn single_sentence_convention() {
        let d = doc("", "Cells divide rapidly.");
        assert_eq!(coherence_features(&d, &emb()).unwrap(), (1.0, 0.0, 1.0));
        assert_eq!(
            coherence_features(&doc("", ""), &emb()),
            Err(FeatureError::EmptyDocument)
        );
    }

    #[test]
    fn three_sentences_brute_force() {
        // hand-built vectors through a provider that ignores the words
        struct Fixed(Vec<SparseVector>, std::sync::atomic::AtomicUsize);
        impl EmbeddingProvider for Fixed {
            fn embed(&self, _: &[String]) -> SparseVector {
                let i = self.1.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                self.0[i].clone()
            }
        }
        let vs = vec![
            SparseVector::from_dense(&[1.0, 0.0, 0.0]),
            SparseVector::from_dense(&[1.0, 1.0, 0.0]),
            SparseVector::from_dense(&[0.0, 1.0, 1.0]),
        ];
        let provider = Fixed(vs, Default::default());
        let d = doc("", "One a. Two b. Three c.");
        let (avg, std, max) = coherence_features(&d, &provider).unwrap();
        // pairs: (1,2) = 1/sqrt2, (1,3) = 0, (2,3) = 1/2
        let sims = [0.5f64.sqrt(), 0.0, 0.5];
        let mean = sims.iter().sum::<f64>() / 3.0;
        let sd = (sims.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / 3.0).sqrt();
        assert!((avg - mean).abs() < 1e-12);
        assert!((std - sd).abs() < 1e-12);
        assert!((max - 0.5f64.sqrt()).abs() < 1e-12);
    }

    fn tiny_lm() -> NGramModel {
        let config = NGramConfig {
            order: 1,
            alpha: 1.0,
            min_count: 1,
            markers: true,
        };
        NGramModel::train_sentences(&[vec!["cells", "divide", "cells"]], config).unwrap()
    }

    #[test]
    fn title_cosine_cases() {
        let lm = tiny_lm();
        let same = doc("Cells divide rapidly", "Cells divide rapidly.");
        let (cos, _) = consistency_features(&same, &emb(), &lm, 0.7).unwrap();
        assert!((cos - 1.0).abs() < 1e-12);
        let other = doc("Graphs encode relations", "Cells divide rapidly.");
        let (cos, _) = consistency_features(&other, &emb(), &lm, 0.7).unwrap();
        assert_eq!(cos, 0.0);
    }

    #[test]
    fn generation_score_by_hand() {
        // LM: unigram counts cells:2 divide:1 </s>:1, V = 3 markers + 2 words = 5, alpha 1
        let lm = tiny_lm();
        let d = doc("cells grow fast", "Cells divide and cells grow.");
        let (_, score) = consistency_features(&d, &emb(), &lm, 0.7).unwrap();
        // abstract words: cells divide and cells grow -> N = 5
        let p_doc = |c: f64| (c + 1.0) / (5.0 + 5.0);
        let p_bg = |c: f64| (c + 1.0) / (4.0 + 5.0);
        let mix = |pd: f64, pb: f64| (0.7 * pd + 0.3 * pb).ln();
        let expected = (mix(p_doc(2.0), p_bg(2.0))
            + mix(p_doc(1.0), p_bg(0.0))
            + mix(p_doc(0.0), p_bg(0.0)))
            / 3.0;
        assert!((score - expected).abs() < 1e-12, "{score} vs {expected}");
    }

    #[test]
    fn empty_title() {
        let d = doc("", "Cells divide.");
        assert_eq!(
            consistency_features(&d, &emb(), &tiny_lm(), 0.7),
            Err(FeatureError::EmptyTitle)
        );
    }
}
