use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CorpusError, LabeledRecord};
use crate::Label;

/// Per-label train quotas: floors of the exact shares, then the leftover
/// seats of `round(n * fraction)` go to the largest remainders (AI first on
/// ties).
fn quotas(counts: [usize; 2], train_fraction: f64) -> [usize; 2] {
    let total: usize = counts.iter().sum();
    let target = (total as f64 * train_fraction).round() as usize;
    let exact = counts.map(|c| c as f64 * train_fraction);
    let mut q = exact.map(|x| x.floor() as usize);
    let mut order = [0usize, 1];
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra)
    });
    let mut left = target.saturating_sub(q[0] + q[1]);
    for &k in order.iter().cycle().take(4) {
        if left == 0 {
            break;
        }
        if q[k] < counts[k] {
            q[k] += 1;
            left -= 1;
        }
    }
    q
}

/// Stratified, seeded train/test partition. Each side keeps the input
/// order.
pub fn split_corpus(
    records: &[LabeledRecord],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<LabeledRecord>, Vec<LabeledRecord>), CorpusError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(CorpusError::InvalidField {
            field: "train_fraction".into(),
            message: format!("{train_fraction} is not in (0, 1)"),
        });
    }
    let mut by_label: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, r) in records.iter().enumerate() {
        by_label[r.label.as_u8() as usize].push(i);
    }
    let counts = [by_label[0].len(), by_label[1].len()];
    if counts.iter().any(|&c| c < 2) {
        return Err(CorpusError::TooFewRecords {
            ai: counts[0],
            human: counts[1],
        });
    }
    let q = quotas(counts, train_fraction);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = HashSet::new();
    for (label, idx) in by_label.iter_mut().enumerate() {
        idx.shuffle(&mut rng);
        chosen.extend(idx.iter().take(q[label]).copied());
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (i, r) in records.iter().enumerate() {
        if chosen.contains(&i) {
            train.push(r.clone());
        } else {
            test.push(r.clone());
        }
    }
    Ok((train, test))
}

pub fn label_counts(records: &[LabeledRecord]) -> (usize, usize) {
    let ai = records.iter().filter(|r| r.label == Label::Ai).count();
    (ai, records.len() - ai)
}
