use super::lexicon::Lexicons;
use super::token::{Pos, Token, TokenKind};

const SUFFIX_RULES: &[(&str, Pos)] = &[
    ("ly", Pos::Adv),
    ("ing", Pos::Verb),
    ("ed", Pos::Verb),
    ("tion", Pos::Noun),
    ("ment", Pos::Noun),
    ("ness", Pos::Noun),
    ("ity", Pos::Noun),
    ("ous", Pos::Adj),
    ("al", Pos::Adj),
    ("ive", Pos::Adj),
    ("ic", Pos::Adj),
];

/// Suffix rules only fire when at least this many characters precede the
/// suffix, so `red` or `fly` fall through to the default.
const MIN_STEM: usize = 2;

fn tag_word(lower: &str, lex: &Lexicons) -> Pos {
    if let Some(&pos) = lex.pos_lexicon.get(lower) {
        return pos;
    }
    let len = lower.chars().count();
    for &(suffix, pos) in SUFFIX_RULES {
        if lower.ends_with(suffix) && len >= suffix.len() + MIN_STEM {
            return pos;
        }
    }
    Pos::Noun
}

/// Assigns one tag per token: kind-forced tags for numbers, punctuation and
/// symbols, lexicon lookup then suffix rules for words.
pub fn pos_tag(tokens: &mut [Token], lex: &Lexicons) {
    for tok in tokens.iter_mut() {
        tok.pos = match tok.kind {
            TokenKind::Punctuation => Pos::Punct,
            TokenKind::Number => Pos::Num,
            TokenKind::Symbol => Pos::Other,
            TokenKind::Word => tag_word(&tok.lower(), lex),
        };
    }
}
