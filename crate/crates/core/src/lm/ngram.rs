use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::LmError;
use crate::textproc::{Token, TokenizedDocument};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

const MAGIC: &str = "scidetect-ngram";
const FORMAT_VERSION: u32 = 1;

const BOS_ID: u32 = 0;
const EOS_ID: u32 = 1;
const UNK_ID: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NGramConfig {
    pub order: usize,
    /// Lidstone constant added to every count.
    pub alpha: f64,
    /// Training words seen fewer times than this become `<unk>`.
    pub min_count: u64,
    /// Pad sentences with `<s>`/`</s>` and reserve `<unk>`. Turning this off
    /// gives a bare model over the observed words only.
    pub markers: bool,
}

impl Default for NGramConfig {
    fn default() -> Self {
        Self {
            order: 3,
            alpha: 0.1,
            min_count: 2,
            markers: true,
        }
    }
}

/// Lidstone-smoothed n-gram language model over lowercased tokens.
///
/// `p(w | ctx) = (c(ctx, w) + alpha) / (c(ctx) + alpha * V)` where the context
/// is the previous `order - 1` tokens and `V` counts every vocabulary entry,
/// markers included.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    config: NGramConfig,
    vocab: Vec<String>,
    index: HashMap<String, u32>,
    ngrams: HashMap<Vec<u32>, u64>,
    contexts: HashMap<Vec<u32>, u64>,
    unigrams: Vec<u64>,
    unigram_total: u64,
}

/// Tokens as the language model sees them.
pub fn lm_words(sentence: &[Token]) -> Vec<String> {
    sentence.iter().map(Token::lower).collect()
}

impl NGramModel {
    fn empty(config: NGramConfig, vocab: Vec<String>) -> Self {
        let index = vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        let unigrams = vec![0; vocab.len()];
        Self {
            config,
            vocab,
            index,
            ngrams: HashMap::new(),
            contexts: HashMap::new(),
            unigrams,
            unigram_total: 0,
        }
    }

    /// Trains on pre-split sentences of words (already case-folded).
    pub fn train_sentences<S, W>(sentences: &[S], config: NGramConfig) -> Result<Self, LmError>
    where
        S: AsRef<[W]>,
        W: AsRef<str>,
    {
        if config.order == 0 {
            return Err(LmError::BadOrder(config.order));
        }
        if !(config.alpha > 0.0 && config.alpha.is_finite()) {
            return Err(LmError::BadAlpha(config.alpha));
        }
        let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
        for s in sentences {
            for w in s.as_ref() {
                *freq.entry(w.as_ref()).or_default() += 1;
            }
        }
        if freq.is_empty() {
            return Err(LmError::EmptyCorpus);
        }

        let mut vocab: Vec<String> = if config.markers {
            vec![BOS.into(), EOS.into(), UNK.into()]
        } else {
            Vec::new()
        };
        let min = if config.markers { config.min_count } else { 0 };
        vocab.extend(
            freq.iter()
                .filter(|(w, &c)| c >= min && ![BOS, EOS, UNK].contains(w))
                .map(|(w, _)| (*w).to_string()),
        );
        let mut model = Self::empty(config, vocab);

        for s in sentences {
            let ids = model.encode(s.as_ref().iter().map(AsRef::as_ref));
            let seq = model.padded(&ids);
            let ctx_len = config.order - 1;
            for i in model.first_scored()..seq.len() {
                let Some(w) = seq[i] else { continue };
                let ctx: Option<Vec<u32>> = seq[i - ctx_len..i].iter().copied().collect();
                let Some(ctx) = ctx else { continue };
                let mut gram = ctx.clone();
                gram.push(w);
                *model.ngrams.entry(gram).or_default() += 1;
                *model.contexts.entry(ctx).or_default() += 1;
                model.unigrams[w as usize] += 1;
                model.unigram_total += 1;
            }
        }
        Ok(model)
    }

    /// Trains on the body sentences of tokenized documents.
    pub fn train(docs: &[TokenizedDocument], config: NGramConfig) -> Result<Self, LmError> {
        if docs.is_empty() {
            return Err(LmError::EmptyCorpus);
        }
        let sentences: Vec<Vec<String>> = docs
            .iter()
            .flat_map(|d| d.sentences.iter().map(|s| lm_words(s)))
            .collect();
        Self::train_sentences(&sentences, config)
    }

    /// Maps words to ids; out-of-vocabulary words become `<unk>`, or `None`
    /// in a bare model.
    fn encode<'a, I>(&self, words: I) -> Vec<Option<u32>>
    where
        I: IntoIterator<Item = &'a str>,
    {
        words
            .into_iter()
            .map(|w| match self.index.get(w) {
                Some(&id) => Some(id),
                None if self.config.markers => Some(UNK_ID),
                None => None,
            })
            .collect()
    }

    fn padded(&self, ids: &[Option<u32>]) -> Vec<Option<u32>> {
        if !self.config.markers {
            return ids.to_vec();
        }
        let mut seq = vec![Some(BOS_ID); self.config.order - 1];
        seq.extend_from_slice(ids);
        seq.push(Some(EOS_ID));
        seq
    }

    /// Positions before this have an incomplete history: only reachable in
    /// a bare model, where they are skipped.
    fn first_scored(&self) -> usize {
        self.config.order - 1
    }

    pub fn config(&self) -> &NGramConfig {
        &self.config
    }

    pub fn order(&self) -> usize {
        self.config.order
    }

    pub fn alpha(&self) -> f64 {
        self.config.alpha
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    /// Count of the full-order n-gram `context ++ [word]`.
    pub fn count(&self, context: &[&str], word: &str) -> u64 {
        let mut key = Vec::with_capacity(context.len() + 1);
        for w in context.iter().chain(std::iter::once(&word)) {
            match self.index.get(*w) {
                Some(&id) => key.push(id),
                None => return 0,
            }
        }
        self.ngrams.get(&key).copied().unwrap_or(0)
    }

    pub fn unigram_count(&self, word: &str) -> u64 {
        self.id_of(word).map(|id| self.unigrams[id as usize]).unwrap_or(0)
    }

    pub fn unigram_total(&self) -> u64 {
        self.unigram_total
    }

    fn id_of(&self, word: &str) -> Option<u32> {
        match self.index.get(word) {
            Some(&id) => Some(id),
            None if self.config.markers => Some(UNK_ID),
            None => None,
        }
    }

    fn denominator(&self, context_count: u64) -> f64 {
        context_count as f64 + self.config.alpha * self.vocab.len() as f64
    }

    fn prob_ids(&self, ctx: &[Option<u32>], w: Option<u32>) -> f64 {
        let known: Option<Vec<u32>> = ctx.iter().copied().collect();
        let (gram_count, ctx_count) = match known {
            Some(ctx) => {
                let ctx_count = self.contexts.get(&ctx).copied().unwrap_or(0);
                let gram_count = match w {
                    Some(w) => {
                        let mut gram = ctx;
                        gram.push(w);
                        self.ngrams.get(&gram).copied().unwrap_or(0)
                    }
                    None => 0,
                };
                (gram_count, ctx_count)
            }
            None => (0, 0),
        };
        (gram_count as f64 + self.config.alpha) / self.denominator(ctx_count)
    }

    /// `p(word | context)`; the context is truncated or `<s>`-padded to
    /// `order - 1` words.
    pub fn prob(&self, context: &[&str], word: &str) -> f64 {
        let ctx = self.fit_context(context);
        let w = self.encode(std::iter::once(word))[0];
        self.prob_ids(&ctx, w)
    }

    /// `p(w | context)` for every vocabulary entry, in [`Self::vocab`] order.
    pub fn distribution(&self, context: &[&str]) -> Vec<f64> {
        let ctx = self.fit_context(context);
        (0..self.vocab.len() as u32)
            .map(|w| self.prob_ids(&ctx, Some(w)))
            .collect()
    }

    fn fit_context(&self, context: &[&str]) -> Vec<Option<u32>> {
        let n = self.config.order - 1;
        let mut ctx: Vec<Option<u32>> = self.encode(context.iter().copied());
        if ctx.len() > n {
            ctx.drain(..ctx.len() - n);
        }
        while ctx.len() < n {
            ctx.insert(0, if self.config.markers { Some(BOS_ID) } else { None });
        }
        ctx
    }

    /// Add-alpha unigram probability, used as a background distribution.
    pub fn unigram_prob(&self, word: &str) -> f64 {
        let c = self.id_of(word).map(|id| self.unigrams[id as usize]).unwrap_or(0);
        (c as f64 + self.config.alpha) / self.denominator(self.unigram_total)
    }

    /// Natural-log probability of one sentence and the number of scored
    /// positions (words plus the end marker). An empty sentence scores 0.
    pub fn sentence_log_prob<S: AsRef<str>>(&self, words: &[S]) -> (f64, usize) {
        if words.is_empty() {
            return (0.0, 0);
        }
        let ids = self.encode(words.iter().map(AsRef::as_ref));
        let seq = self.padded(&ids);
        let ctx_len = self.config.order - 1;
        let mut total = 0.0;
        let mut scored = 0usize;
        for i in self.first_scored()..seq.len() {
            total += self.prob_ids(&seq[i - ctx_len..i], seq[i]).ln();
            scored += 1;
        }
        (total, scored)
    }

    /// Sum of `ln p(w_i | history)` over the tokens treated as one sentence.
    pub fn log_prob<S: AsRef<str>>(&self, words: &[S]) -> f64 {
        self.sentence_log_prob(words).0
    }

    /// Observed continuations of a context id sequence, excluding markers
    /// that can't be generated.
    pub(crate) fn continuations(&self) -> HashMap<Vec<u32>, Vec<(u32, u64)>> {
        let mut out: HashMap<Vec<u32>, Vec<(u32, u64)>> = HashMap::new();
        for (gram, &c) in &self.ngrams {
            let (w, ctx) = gram.split_last().expect("n-grams are non-empty");
            if self.config.markers && (*w == BOS_ID || *w == UNK_ID) {
                continue;
            }
            out.entry(ctx.to_vec()).or_default().push((*w, c));
        }
        for v in out.values_mut() {
            v.sort_unstable();
        }
        out
    }

    pub(crate) fn word(&self, id: u32) -> &str {
        &self.vocab[id as usize]
    }

    pub(crate) fn is_eos(&self, id: u32) -> bool {
        self.config.markers && id == EOS_ID
    }

    pub(crate) fn start_context(&self) -> Vec<u32> {
        vec![BOS_ID; self.config.order - 1]
    }

    pub fn to_json(&self) -> String {
        let mut ngrams: Vec<Vec<u64>> = self
            .ngrams
            .iter()
            .map(|(g, &c)| g.iter().map(|&i| u64::from(i)).chain([c]).collect())
            .collect();
        ngrams.sort_unstable();
        let file = ModelFile {
            magic: MAGIC.into(),
            version: FORMAT_VERSION,
            order: self.config.order,
            alpha: self.config.alpha,
            min_count: self.config.min_count,
            markers: self.config.markers,
            vocab: self.vocab.clone(),
            ngrams,
        };
        serde_json::to_string(&file).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LmError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| LmError::Format(e.to_string()))?;
        if file.magic != MAGIC {
            return Err(LmError::Format(format!("bad magic `{}`", file.magic)));
        }
        if file.version != FORMAT_VERSION {
            return Err(LmError::Format(format!("unsupported version {}", file.version)));
        }
        if file.order == 0 {
            return Err(LmError::BadOrder(0));
        }
        let config = NGramConfig {
            order: file.order,
            alpha: file.alpha,
            min_count: file.min_count,
            markers: file.markers,
        };
        let mut model = Self::empty(config, file.vocab);
        let v = model.vocab.len() as u64;
        for row in file.ngrams {
            if row.len() != file.order + 1 || row[..file.order].iter().any(|&i| i >= v) {
                return Err(LmError::Format("malformed n-gram row".into()));
            }
            let gram: Vec<u32> = row[..file.order].iter().map(|&i| i as u32).collect();
            let c = row[file.order];
            let w = gram[file.order - 1];
            *model.contexts.entry(gram[..file.order - 1].to_vec()).or_default() += c;
            model.unigrams[w as usize] += c;
            model.unigram_total += c;
            model.ngrams.insert(gram, c);
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), LmError> {
        fs::write(path, self.to_json()).map_err(|e| LmError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, LmError> {
        let text =
            fs::read_to_string(path).map_err(|e| LmError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    magic: String,
    version: u32,
    order: usize,
    alpha: f64,
    min_count: u64,
    markers: bool,
    vocab: Vec<String>,
    /// Each row is the n-gram's word ids followed by its count.
    ngrams: Vec<Vec<u64>>,
}
