use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Number,
    Punctuation,
    Symbol,
}

/// Coarse part-of-speech inventory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Adj,
    Adv,
    Conj,
    Noun,
    Num,
    Pron,
    Verb,
    Det,
    Adp,
    Punct,
    Other,
}

impl Pos {
    pub const ALL: [Pos; 11] = [
        Pos::Adj,
        Pos::Adv,
        Pos::Conj,
        Pos::Noun,
        Pos::Num,
        Pos::Pron,
        Pos::Verb,
        Pos::Det,
        Pos::Adp,
        Pos::Punct,
        Pos::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
            Pos::Conj => "CONJ",
            Pos::Noun => "NOUN",
            Pos::Num => "NUM",
            Pos::Pron => "PRON",
            Pos::Verb => "VERB",
            Pos::Det => "DET",
            Pos::Adp => "ADP",
            Pos::Punct => "PUNCT",
            Pos::Other => "OTHER",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown POS tag `{}`", self.0)
    }
}

impl std::error::Error for UnknownTag {}

impl FromStr for Pos {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pos::ALL
            .iter()
            .copied()
            .find(|p| p.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub pos: Pos,
}

impl Token {
    /// Builds a token with the tag forced by its kind (words start as NOUN
    /// until [`pos_tag`](super::pos_tag) runs).
    pub fn new(surface: impl Into<String>, kind: TokenKind) -> Self {
        let pos = match kind {
            TokenKind::Punctuation => Pos::Punct,
            TokenKind::Number => Pos::Num,
            TokenKind::Symbol => Pos::Other,
            TokenKind::Word => Pos::Noun,
        };
        Self {
            surface: surface.into(),
            kind,
            pos,
        }
    }

    /// Words and numbers: the denominator for word-level frequencies.
    pub fn is_wordlike(&self) -> bool {
        matches!(self.kind, TokenKind::Word | TokenKind::Number)
    }

    pub fn lower(&self) -> String {
        self.surface.to_lowercase()
    }
}
