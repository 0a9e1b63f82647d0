use std::collections::HashMap;

use rand::Rng;

use super::NGramModel;

type Table<K> = HashMap<K, (Vec<(u32, u64)>, u64)>;

/// Draws sentences from the maximum-likelihood continuations of a trained
/// model. `<unk>` is never emitted, so output stays readable. A context whose
/// only continuations were `<unk>` backs off to the continuations of its last
/// word pooled over all contexts.
pub struct SentenceSampler<'a> {
    model: &'a NGramModel,
    table: Table<Vec<u32>>,
    backoff: Table<u32>,
}

fn draw<R: Rng + ?Sized>(rng: &mut R, next: &[(u32, u64)], total: u64) -> u32 {
    let mut draw = rng.gen_range(0..total);
    for &(w, c) in next {
        if draw < c {
            return w;
        }
        draw -= c;
    }
    next[next.len() - 1].0
}

impl<'a> SentenceSampler<'a> {
    pub fn new(model: &'a NGramModel) -> Self {
        let mut pooled: HashMap<u32, HashMap<u32, u64>> = HashMap::new();
        let conts = model.continuations();
        for (ctx, next) in &conts {
            if let Some(&last) = ctx.last() {
                let slot = pooled.entry(last).or_default();
                for &(w, c) in next {
                    *slot.entry(w).or_default() += c;
                }
            }
        }
        let with_total = |next: Vec<(u32, u64)>| {
            let total = next.iter().map(|&(_, c)| c).sum();
            (next, total)
        };
        let table = conts.into_iter().map(|(ctx, next)| (ctx, with_total(next))).collect();
        let backoff = pooled
            .into_iter()
            .map(|(last, next)| {
                let mut next: Vec<(u32, u64)> = next.into_iter().collect();
                next.sort_unstable();
                (last, with_total(next))
            })
            .collect();
        Self {
            model,
            table,
            backoff,
        }
    }

    /// One sentence of at most `max_len` words (end marker excluded).
    pub fn sample_sentence<R: Rng + ?Sized>(&self, rng: &mut R, max_len: usize) -> Vec<String> {
        let mut ctx = self.model.start_context();
        let mut out = Vec::new();
        while out.len() < max_len {
            let found = self
                .table
                .get(&ctx)
                .or_else(|| ctx.last().and_then(|w| self.backoff.get(w)))
                .filter(|(_, total)| *total > 0);
            let Some((next, total)) = found else { break };
            let chosen = draw(rng, next, *total);
            if self.model.is_eos(chosen) {
                break;
            }
            out.push(self.model.word(chosen).to_string());
            if !ctx.is_empty() {
                ctx.remove(0);
                ctx.push(chosen);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lm::NGramConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reproduces_deterministic_chain() {
        let corpus = [vec!["we", "show", "results"], vec!["we", "show", "results"]];
        let m = NGramModel::train_sentences(&corpus, NGramConfig { min_count: 1, ..Default::default() })
            .unwrap();
        let s = SentenceSampler::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(s.sample_sentence(&mut rng, 50), vec!["we", "show", "results"]);
    }

    #[test]
    fn never_emits_unknown_and_is_seeded() {
        let corpus = [
            vec!["a", "rare", "b", "c"],
            vec!["a", "b", "c", "b"],
            vec!["c", "b", "a", "c", "a"],
        ];
        let m = NGramModel::train_sentences(&corpus, NGramConfig { order: 2, ..Default::default() })
            .unwrap();
        let s = SentenceSampler::new(&m);
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20).map(|_| s.sample_sentence(&mut rng, 10)).collect::<Vec<_>>()
        };
        let a = run(9);
        assert_eq!(a, run(9));
        assert!(a.iter().flatten().all(|w| w != crate::lm::UNK && m.contains(w)));
    }

    #[test]
    fn backs_off_when_only_unknown_follows() {
        let corpus = [
            vec!["x", "y", "r1"],
            vec!["x", "y", "r2"],
            vec!["z", "y", "q"],
            vec!["z", "y", "q"],
        ];
        let m = NGramModel::train_sentences(&corpus, NGramConfig::default()).unwrap();
        let s = SentenceSampler::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let out = s.sample_sentence(&mut rng, 10);
            assert_eq!(out[1..], ["y", "q"]);
        }
    }
}
