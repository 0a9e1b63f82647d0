//! Local, model-agnostic word attributions: mask words, rescore, and fit a
//! proximity-weighted ridge surrogate on the masks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::linalg::{cholesky, cholesky_solve};
use crate::textproc::TokenizedDocument;
use crate::Label;

pub const KERNEL_WIDTH: f64 = 0.25;
pub const SURROGATE_RIDGE: f64 = 1e-3;
/// Documents with at most this many words can be explained exhaustively.
pub const EXHAUSTIVE_MAX_WORDS: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum ExplainError {
    #[error("document has no words to perturb")]
    EmptyDocument,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { got: usize, needed: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedSample {
    /// One entry per word-like token; `false` means the word is removed.
    pub mask: Vec<bool>,
    pub text: String,
}

/// Perturbed copies of `doc`. Sample 0 is always the unmasked text. In
/// exhaustive mode a document of at most [`EXHAUSTIVE_MAX_WORDS`] words
/// yields every mask exactly once and `n` is ignored; otherwise each word
/// is kept independently with probability 0.5.
pub fn perturb_samples(
    doc: &TokenizedDocument,
    n: usize,
    seed: u64,
    exhaustive: bool,
) -> Result<Vec<PerturbedSample>, ExplainError> {
    let w = doc.word_count();
    if w == 0 {
        return Err(ExplainError::EmptyDocument);
    }
    let masks: Vec<Vec<bool>> = if exhaustive && w <= EXHAUSTIVE_MAX_WORDS {
        let full = (1u32 << w) - 1;
        std::iter::once(full)
            .chain((0..full).rev())
            .map(|bits| (0..w).map(|i| bits >> i & 1 == 1).collect())
            .collect()
    } else {
        if n == 0 {
            return Err(ExplainError::TooFewSamples { got: 0, needed: 1 });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        std::iter::once(vec![true; w])
            .chain((1..n).map(|_| (0..w).map(|_| rng.gen_bool(0.5)).collect()))
            .collect()
    };
    Ok(masks
        .into_iter()
        .map(|mask| PerturbedSample {
            text: doc.masked_text(&mask),
            mask,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attribution {
    pub word: String,
    /// Index among the document's word tokens.
    pub position: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub target_text: String,
    pub predicted_label: Label,
    pub predicted_prob: f64,
    pub attributions: Vec<Attribution>,
    pub n_samples: usize,
    pub seed: u64,
    pub exhaustive: bool,
    pub surrogate_intercept: f64,
    /// Weighted in-sample R^2; `None` when the predictor is constant.
    pub surrogate_r2: Option<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplainConfig {
    pub n_samples: usize,
    pub top_k: usize,
    pub seed: u64,
    pub exhaustive: bool,
}

impl Default for ExplainConfig {
    fn default() -> Self {
        Self {
            n_samples: 1000,
            top_k: 10,
            seed: 42,
            exhaustive: true,
        }
    }
}

fn kernel(kept_fraction: f64) -> f64 {
    (-(1.0 - kept_fraction).powi(2) / (KERNEL_WIDTH * KERNEL_WIDTH)).exp()
}

struct Surrogate {
    intercept: f64,
    weights: Vec<f64>,
    r2: f64,
}

/// Ridge-penalized weighted least squares of `y` on the mask bits plus an
/// unpenalized intercept.
fn fit_surrogate(masks: &[Vec<bool>], y: &[f64], pi: &[f64]) -> Surrogate {
    let d = masks[0].len();
    let p = d + 1;
    let mut a = vec![vec![0.0; p]; p];
    let mut b = vec![0.0; p];
    for ((mask, &yi), &wi) in masks.iter().zip(y).zip(pi) {
        let active: Vec<usize> = std::iter::once(0)
            .chain(mask.iter().enumerate().filter(|(_, &m)| m).map(|(j, _)| j + 1))
            .collect();
        for &r in &active {
            b[r] += wi * yi;
            for &c in &active {
                a[r][c] += wi;
            }
        }
    }
    for (k, row) in a.iter_mut().enumerate().skip(1) {
        row[k] += SURROGATE_RIDGE;
    }
    let mut jitter = 0.0;
    let l = loop {
        if let Some(l) = cholesky(&a) {
            break l;
        }
        jitter = if jitter == 0.0 { 1e-10 } else { jitter * 10.0 };
        a[0][0] += jitter;
    };
    let coef = cholesky_solve(&l, &b);

    let wsum: f64 = pi.iter().sum();
    let ybar = y.iter().zip(pi).map(|(v, w)| v * w).sum::<f64>() / wsum;
    let (mut rss, mut tss) = (0.0, 0.0);
    for ((mask, &yi), &wi) in masks.iter().zip(y).zip(pi) {
        let fit = coef[0]
            + mask
                .iter()
                .zip(&coef[1..])
                .filter(|(m, _)| **m)
                .map(|(_, c)| c)
                .sum::<f64>();
        rss += wi * (yi - fit).powi(2);
        tss += wi * (yi - ybar).powi(2);
    }
    Surrogate {
        intercept: coef[0],
        weights: coef[1..].to_vec(),
        r2: 1.0 - rss / tss,
    }
}

/// Explains `predict_fn` (text to probability of the human class) around
/// `doc`. The top `top_k` word positions by absolute surrogate weight are
/// returned.
pub fn explain_prediction<F>(
    predict_fn: F,
    doc: &TokenizedDocument,
    config: ExplainConfig,
) -> Result<Explanation, ExplainError>
where
    F: Fn(&str) -> f64 + Sync,
{
    let w = doc.word_count();
    let exhaustive = config.exhaustive && w <= EXHAUSTIVE_MAX_WORDS;
    if !exhaustive && config.n_samples < 10 {
        return Err(ExplainError::TooFewSamples {
            got: config.n_samples,
            needed: 10,
        });
    }
    let samples = perturb_samples(doc, config.n_samples, config.seed, config.exhaustive)?;
    let y: Vec<f64> = samples.par_iter().map(|s| predict_fn(&s.text)).collect();
    let pi: Vec<f64> = samples
        .iter()
        .map(|s| kernel(s.mask.iter().filter(|&&m| m).count() as f64 / w as f64))
        .collect();
    let masks: Vec<Vec<bool>> = samples.iter().map(|s| s.mask.clone()).collect();

    let words: Vec<String> = doc
        .tokens()
        .filter(|t| t.is_wordlike())
        .map(|t| t.surface.clone())
        .collect();
    let constant = y.iter().all(|v| (v - y[0]).abs() <= 1e-12);
    let (intercept, weights, r2) = if constant {
        (y[0], vec![0.0; w], None)
    } else {
        let s = fit_surrogate(&masks, &y, &pi);
        (s.intercept, s.weights, Some(s.r2))
    };

    let mut attributions: Vec<Attribution> = words
        .into_iter()
        .zip(weights)
        .enumerate()
        .map(|(position, (word, weight))| Attribution {
            word,
            position,
            weight,
        })
        .collect();
    attributions.sort_by(|a, b| {
        b.weight
            .abs()
            .total_cmp(&a.weight.abs())
            .then(a.position.cmp(&b.position))
    });
    attributions.truncate(config.top_k);

    Ok(Explanation {
        target_text: samples[0].text.clone(),
        predicted_label: Label::from_probability(y[0]),
        predicted_prob: y[0],
        attributions,
        n_samples: samples.len(),
        seed: config.seed,
        exhaustive,
        surrogate_intercept: intercept,
        surrogate_r2: r2,
        degenerate: constant,
    })
}
