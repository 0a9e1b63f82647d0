use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::FeatureError;
use crate::textproc::Token;

/// Sparse vector as `(index, value)` pairs sorted by index.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector(pub Vec<(u32, f64)>);

impl SparseVector {
    pub fn from_dense(values: &[f64]) -> Self {
        Self(
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, &v)| (i as u32, v))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&(_, v)| v == 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// `u . v / (|u| |v|)`, defined as 0 when either vector is zero. Clamped to
/// [-1, 1] against rounding.
pub fn cosine(u: &SparseVector, v: &SparseVector) -> f64 {
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    (u.dot(v) / (nu * nv)).clamp(-1.0, 1.0)
}

pub fn cosine_dense(u: &[f64], v: &[f64]) -> f64 {
    cosine(&SparseVector::from_dense(u), &SparseVector::from_dense(v))
}

/// Sentence-embedding backend used by the semantic and pragmatic features.
pub trait EmbeddingProvider: Sync {
    fn embed(&self, words: &[String]) -> SparseVector;
}

/// Lowercased word-like tokens: the embedding view of a token sequence.
pub fn embedding_words(tokens: &[Token]) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| t.is_wordlike())
        .map(Token::lower)
        .collect()
}

/// TF-IDF vectorizer with sublinear term frequency and smoothed idf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingModel {
    pub vocabulary: BTreeMap<String, u32>,
    pub idf: Vec<f64>,
    pub built_from: String,
    pub documents: usize,
}

impl EmbeddingModel {
    /// Fits vocabulary and `idf = ln((1 + N) / (1 + df)) + 1` over the given
    /// documents (each a list of lowercased words).
    pub fn build<D: AsRef<[String]>>(docs: &[D]) -> Self {
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        let mut hasher = Sha256::new();
        for d in docs {
            let unique: BTreeSet<&str> = d.as_ref().iter().map(String::as_str).collect();
            for w in unique {
                *df.entry(w).or_default() += 1;
            }
            for w in d.as_ref() {
                hasher.update(w.as_bytes());
                hasher.update([0x1f]);
            }
            hasher.update([0x1e]);
        }
        let n = docs.len() as f64;
        let mut vocabulary = BTreeMap::new();
        let mut idf = Vec::with_capacity(df.len());
        for (i, (w, count)) in df.into_iter().enumerate() {
            vocabulary.insert(w.to_string(), i as u32);
            idf.push(((1.0 + n) / (1.0 + count as f64)).ln() + 1.0);
        }
        let digest = hasher.finalize();
        Self {
            vocabulary,
            idf,
            built_from: digest.iter().map(|b| format!("{b:02x}")).collect(),
            documents: docs.len(),
        }
    }

    pub fn vocab_size(&self) -> usize {
        self.idf.len()
    }

    pub fn save(&self, path: &Path) -> Result<(), FeatureError> {
        let text = serde_json::to_string(self).expect("embedding serializes");
        fs::write(path, text).map_err(|e| FeatureError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, FeatureError> {
        let text = fs::read_to_string(path)
            .map_err(|e| FeatureError::Io(format!("{}: {e}", path.display())))?;
        let model: Self =
            serde_json::from_str(&text).map_err(|e| FeatureError::Format(e.to_string()))?;
        if model.vocabulary.len() != model.idf.len()
            || model.vocabulary.values().any(|&i| i as usize >= model.idf.len())
        {
            return Err(FeatureError::Format("vocabulary and idf disagree".into()));
        }
        Ok(model)
    }
}

impl EmbeddingProvider for EmbeddingModel {
    /// `(1 + ln tf) * idf` per in-vocabulary word, L2-normalized. Text made
    /// only of unknown words maps to the zero vector.
    fn embed(&self, words: &[String]) -> SparseVector {
        let mut tf: BTreeMap<u32, usize> = BTreeMap::new();
        for w in words {
            if let Some(&i) = self.vocabulary.get(w) {
                *tf.entry(i).or_default() += 1;
            }
        }
        let mut v: Vec<(u32, f64)> = tf
            .into_iter()
            .map(|(i, c)| (i, (1.0 + (c as f64).ln()) * self.idf[i as usize]))
            .collect();
        let norm = v.iter().map(|(_, x)| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, x) in &mut v {
                *x /= norm;
            }
        }
        SparseVector(v)
    }
}
