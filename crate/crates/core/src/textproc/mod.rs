//! Deterministic text processing: sentence segmentation, tokenization,
//! lexicon-plus-suffix POS tagging and syllable counting.

mod lexicon;
mod pos;
mod segment;
mod syllable;
mod token;
mod tokenize;

pub use lexicon::{LexiconError, Lexicons};
pub use pos::pos_tag;
pub use segment::segment_sentences;
pub use syllable::count_syllables;
pub use token::{Pos, Token, TokenKind, UnknownTag};
pub use tokenize::{detokenize, tokenize};

use serde::{Deserialize, Serialize};

/// A title plus the sentence-split, tagged body of an abstract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenizedDocument {
    pub title_tokens: Vec<Token>,
    pub sentences: Vec<Vec<Token>>,
    pub raw_text: String,
}

fn tagged(text: &str, lex: &Lexicons) -> Vec<Token> {
    let mut toks = tokenize(text);
    pos_tag(&mut toks, lex);
    toks
}

impl TokenizedDocument {
    pub fn new(title: &str, body: &str, lex: &Lexicons) -> Self {
        let sentences = segment_sentences(body)
            .into_iter()
            .map(|s| tagged(s, lex))
            .filter(|s| !s.is_empty())
            .collect();
        Self {
            title_tokens: tagged(title, lex),
            sentences,
            raw_text: body.to_string(),
        }
    }

    /// A document without a title.
    pub fn from_text(body: &str, lex: &Lexicons) -> Self {
        Self::new("", body, lex)
    }

    /// Body tokens in reading order.
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flatten()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn word_count(&self) -> usize {
        self.tokens().filter(|t| t.is_wordlike()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.token_count() == 0
    }

    /// Rebuilds the body with every word-like token whose running index is
    /// `false` in `keep` removed. Sentences left without tokens are dropped.
    pub fn masked_text(&self, keep: &[bool]) -> String {
        let mut idx = 0usize;
        let mut parts = Vec::new();
        for sentence in &self.sentences {
            let mut surfaces = Vec::new();
            for tok in sentence {
                if tok.is_wordlike() {
                    let kept = keep.get(idx).copied().unwrap_or(true);
                    idx += 1;
                    if !kept {
                        continue;
                    }
                }
                surfaces.push(tok.surface.as_str());
            }
            if surfaces.iter().any(|s| !s.is_empty()) {
                parts.push(detokenize(surfaces));
            }
        }
        parts.join(" ")
    }
}
