use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

pub const FEATURE_COUNT: usize = 27;

/// Canonical feature order: 20 syntax, 5 semantics, 2 pragmatics.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "avg_word_len",
    "pos_ADJ",
    "pos_ADV",
    "pos_CONJ",
    "pos_NOUN",
    "pos_NUM",
    "pos_PRON",
    "pos_VERB",
    "flesch",
    "punct_comma",
    "punct_period",
    "special_hyphen",
    "uppercase",
    "fw_a",
    "fw_in",
    "fw_of",
    "fw_the",
    "avg_sent_len",
    "avg_sent_ppl",
    "text_ppl",
    "cos_title_abstract",
    "coh_avg",
    "coh_std",
    "coh_max",
    "gen_score",
    "self_contradiction",
    "redundancy",
];

/// Human-readable row labels for reports.
pub const FEATURE_LABELS: [&str; FEATURE_COUNT] = [
    "Average Word Length",
    "POS Tag Frequency #ADJ",
    "POS Tag Frequency #ADV",
    "POS Tag Frequency #CONJ",
    "POS Tag Frequency #NOUN",
    "POS Tag Frequency #NUM",
    "POS Tag Frequency #PRON",
    "POS Tag Frequency #VERB",
    "Flesch Reading Ease",
    "Punctuation Frequency #,",
    "Punctuation Frequency #.",
    "Special Character Frequency #-",
    "Uppercase Frequency",
    "Function Word Frequency #a",
    "Function Word Frequency #in",
    "Function Word Frequency #of",
    "Function Word Frequency #the",
    "Average Sentence Length",
    "Avg Sentence PPL",
    "Text PPL",
    "Cos Similarity Abstract-Title",
    "Avg Sentence Cos Similarity",
    "Std Sentence Cos Similarity",
    "Max Sentence Cos Similarity",
    "Title Generation Score",
    "Self-contradiction",
    "Redundancy",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureGroup {
    Syntax,
    Semantics,
    Pragmatics,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 3] = [
        FeatureGroup::Syntax,
        FeatureGroup::Semantics,
        FeatureGroup::Pragmatics,
    ];

    pub fn range(self) -> std::ops::Range<usize> {
        match self {
            FeatureGroup::Syntax => 0..20,
            FeatureGroup::Semantics => 20..25,
            FeatureGroup::Pragmatics => 25..27,
        }
    }

    pub fn of_index(idx: usize) -> FeatureGroup {
        match idx {
            0..=19 => FeatureGroup::Syntax,
            20..=24 => FeatureGroup::Semantics,
            _ => FeatureGroup::Pragmatics,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureGroup::Syntax => "syntax",
            FeatureGroup::Semantics => "semantics",
            FeatureGroup::Pragmatics => "pragmatics",
        }
    }
}

impl fmt::Display for FeatureGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn feature_index(name: &str) -> Option<usize> {
    FEATURE_NAMES.iter().position(|n| *n == name)
}

/// The 27 named features of one document, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; FEATURE_COUNT],
}

impl FeatureVector {
    pub fn new(values: [f64; FEATURE_COUNT]) -> Self {
        Self { values }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        feature_index(name).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, FeatureGroup, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (FEATURE_NAMES[i], FeatureGroup::of_index(i), v))
    }

    pub fn group(&self, group: FeatureGroup) -> &[f64] {
        &self.values[group.range()]
    }
}

impl Serialize for FeatureVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(FEATURE_COUNT))?;
        for (name, _, v) in self.iter() {
            map.serialize_entry(name, &v)?;
        }
        map.end()
    }
}
