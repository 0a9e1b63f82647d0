use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

use super::token::Pos;

const FUNCTION_WORDS: &str = include_str!("../../data/function_words.txt");
const NEGATION_CUES: &str = include_str!("../../data/negation_cues.txt");
const POS_LEXICON: &str = include_str!("../../data/pos_lexicon.tsv");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `word<TAB>TAG`")]
    BadLine { path: String, line: usize },
    #[error("{path}:{line}: unknown tag `{tag}`")]
    BadTag {
        path: String,
        line: usize,
        tag: String,
    },
}

/// Closed-class word lists used by the tagger and the feature extractors.
/// All entries are lowercase.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicons {
    pub function_words: BTreeSet<String>,
    pub negation_cues: BTreeSet<String>,
    pub pos_lexicon: BTreeMap<String, Pos>,
}

fn word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn pos_table(text: &str, path: &str) -> Result<BTreeMap<String, Pos>, LexiconError> {
    let mut out = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, tag) = line.split_once('\t').ok_or_else(|| LexiconError::BadLine {
            path: path.to_string(),
            line: idx + 1,
        })?;
        let pos = tag.parse::<Pos>().map_err(|_| LexiconError::BadTag {
            path: path.to_string(),
            line: idx + 1,
            tag: tag.to_string(),
        })?;
        out.insert(word.trim().to_lowercase(), pos);
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl Default for Lexicons {
    fn default() -> Self {
        Self::embedded()
    }
}

impl Lexicons {
    /// The lexicons shipped with the crate.
    pub fn embedded() -> Self {
        Self {
            function_words: word_list(FUNCTION_WORDS),
            negation_cues: word_list(NEGATION_CUES),
            pos_lexicon: pos_table(POS_LEXICON, "<embedded>").expect("embedded POS lexicon is valid"),
        }
    }

    /// Embedded lexicons with any of the three tables replaced from disk.
    pub fn with_overrides(
        function_words: Option<&Path>,
        negation_cues: Option<&Path>,
        pos_lexicon: Option<&Path>,
    ) -> Result<Self, LexiconError> {
        let mut lex = Self::embedded();
        if let Some(p) = function_words {
            lex.function_words = word_list(&read(p)?);
        }
        if let Some(p) = negation_cues {
            lex.negation_cues = word_list(&read(p)?);
        }
        if let Some(p) = pos_lexicon {
            lex.pos_lexicon = pos_table(&read(p)?, &p.display().to_string())?;
        }
        Ok(lex)
    }

    pub fn is_function_word(&self, lower: &str) -> bool {
        self.function_words.contains(lower)
    }

    /// Negation cue, counting clitic forms such as `doesn't`.
    pub fn is_negation(&self, lower: &str) -> bool {
        self.negation_cues.contains(lower) || lower.ends_with("n't") || lower.ends_with("n\u{2019}t")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_invariants() {
        let lex = Lexicons::embedded();
        for w in ["a", "in", "of", "the"] {
            assert!(lex.is_function_word(w), "{w}");
        }
        for w in ["not", "no", "never", "n't", "cannot", "without", "none", "neither", "nor"] {
            assert!(lex.negation_cues.contains(w), "{w}");
        }
        assert!(lex
            .function_words
            .iter()
            .chain(lex.negation_cues.iter())
            .chain(lex.pos_lexicon.keys())
            .all(|w| *w == w.to_lowercase()));
    }

    #[test]
    fn clitic_negation() {
        let lex = Lexicons::embedded();
        assert!(lex.is_negation("doesn't"));
        assert!(!lex.is_negation("does"));
    }

    #[test]
    fn overrides_from_files() {
        let dir = tempfile::tempdir().unwrap();
        let fw = dir.path().join("fw.txt");
        let pos = dir.path().join("pos.tsv");
        fs::write(&fw, "The\nof\n").unwrap();
        fs::write(&pos, "cat\tNOUN\nRuns\tverb\n").unwrap();
        let lex = Lexicons::with_overrides(Some(&fw), None, Some(&pos)).unwrap();
        assert_eq!(lex.function_words.len(), 2);
        assert!(lex.is_function_word("the"));
        assert_eq!(lex.pos_lexicon.get("runs"), Some(&Pos::Verb));
        assert!(lex.negation_cues.contains("not"));
    }

    #[test]
    fn bad_tag_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let pos = dir.path().join("pos.tsv");
        fs::write(&pos, "cat\tANIMAL\n").unwrap();
        let err = Lexicons::with_overrides(None, None, Some(&pos)).unwrap_err();
        assert!(matches!(err, LexiconError::BadTag { line: 1, .. }));
    }
}
