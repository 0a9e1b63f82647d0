use super::FeatureError;
use crate::textproc::{count_syllables, Pos, TokenizedDocument};

const TAGGED: [Pos; 7] = [
    Pos::Adj,
    Pos::Adv,
    Pos::Conj,
    Pos::Noun,
    Pos::Num,
    Pos::Pron,
    Pos::Verb,
];

const TRACKED_FUNCTION_WORDS: [&str; 4] = ["a", "in", "of", "the"];

/// `206.835 - 1.015 * words/sentences - 84.6 * syllables/words`.
pub fn flesch_reading_ease(doc: &TokenizedDocument) -> Result<f64, FeatureError> {
    let sentences = doc.sentences.len();
    let words: Vec<&str> = doc
        .tokens()
        .filter(|t| t.is_wordlike())
        .map(|t| t.surface.as_str())
        .collect();
    if sentences == 0 || words.is_empty() {
        return Err(FeatureError::EmptyDocument);
    }
    let syllables: usize = words.iter().map(|w| count_syllables(w)).sum();
    let n = words.len() as f64;
    Ok(206.835 - 1.015 * (n / sentences as f64) - 84.6 * (syllables as f64 / n))
}

/// The 20 writing-style values in canonical order. Word-level rates divide
/// by word-like tokens (words and numbers), punctuation rates by all tokens,
/// the hyphen rate by non-whitespace characters and the uppercase rate by
/// alphabetic letters.
pub fn writing_style_features(
    doc: &TokenizedDocument,
    text_ppl: f64,
    avg_sent_ppl: f64,
) -> Result<[f64; 20], FeatureError> {
    let all: Vec<_> = doc.tokens().collect();
    let words: Vec<_> = all.iter().filter(|t| t.is_wordlike()).collect();
    if words.is_empty() {
        return Err(FeatureError::EmptyDocument);
    }
    let n_words = words.len() as f64;
    let n_tokens = all.len() as f64;

    let mut out = [0.0; 20];
    out[0] = words.iter().map(|t| t.surface.chars().count()).sum::<usize>() as f64 / n_words;
    for (k, pos) in TAGGED.iter().enumerate() {
        out[1 + k] = words.iter().filter(|t| t.pos == *pos).count() as f64 / n_words;
    }
    out[8] = flesch_reading_ease(doc)?;
    out[9] = all.iter().filter(|t| t.surface == ",").count() as f64 / n_tokens;
    out[10] = all.iter().filter(|t| t.surface == ".").count() as f64 / n_tokens;

    let (mut chars, mut hyphens, mut letters, mut upper) = (0usize, 0usize, 0usize, 0usize);
    for c in all.iter().flat_map(|t| t.surface.chars()) {
        chars += 1;
        if c == '-' {
            hyphens += 1;
        }
        if c.is_alphabetic() {
            letters += 1;
            if c.is_uppercase() {
                upper += 1;
            }
        }
    }
    out[11] = hyphens as f64 / chars as f64;
    out[12] = if letters == 0 {
        0.0
    } else {
        upper as f64 / letters as f64
    };
    for (k, fw) in TRACKED_FUNCTION_WORDS.iter().enumerate() {
        out[13 + k] = words.iter().filter(|t| t.lower() == *fw).count() as f64 / n_words;
    }
    out[17] = n_words / doc.sentences.len() as f64;
    out[18] = avg_sent_ppl;
    out[19] = text_ppl;
    Ok(out)
}
