use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::CorpusError;
use crate::textproc::tokenize;
use crate::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Pubmed,
    Acl,
    Arxiv,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Bio,
    Cs,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Bio => "bio",
            Domain::Cs => "cs",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Domain {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bio" => Ok(Domain::Bio),
            "cs" => Ok(Domain::Cs),
            _ => Err(CorpusError::InvalidField {
                field: "domain".into(),
                message: format!("unknown domain {s:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

pub const HUMAN_GENERATOR: &str = "human";

/// One title and abstract with provenance and label. Fields the schema does
/// not know are kept in `extra` and written back out unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledRecord {
    pub id: String,
    pub source: Source,
    pub domain: Domain,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub label: Label,
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

const REQUIRED: [&str; 7] = [
    "id",
    "source",
    "domain",
    "title",
    "abstract",
    "label",
    "generator",
];

impl LabeledRecord {
    /// Checks the label/generator pairing and that title and abstract both
    /// contain a word.
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.id.trim().is_empty() {
            return Err(CorpusError::InvalidField {
                field: "id".into(),
                message: "empty id".into(),
            });
        }
        for (field, text) in [("title", &self.title), ("abstract", &self.abstract_text)] {
            if !tokenize(text).iter().any(|t| t.is_wordlike()) {
                return Err(CorpusError::EmptyText(field.into()));
            }
        }
        if (self.generator == HUMAN_GENERATOR) != (self.label == Label::Human) {
            return Err(CorpusError::GeneratorMismatch {
                generator: self.generator.clone(),
                label: self.label.as_u8(),
            });
        }
        Ok(())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Parses and validates one JSONL line.
pub fn parse_record(line: &str) -> Result<LabeledRecord, CorpusError> {
    let value: Value =
        serde_json::from_str(line).map_err(|e| CorpusError::Json(e.to_string()))?;
    let Value::Object(obj) = &value else {
        return Err(CorpusError::Json("expected a JSON object".into()));
    };
    for field in REQUIRED {
        if obj.get(field).map_or(true, Value::is_null) {
            return Err(CorpusError::MissingField(field.into()));
        }
    }
    match obj["label"].as_u64() {
        Some(0 | 1) => {}
        _ => return Err(CorpusError::BadLabel(obj["label"].to_string())),
    }
    let record: LabeledRecord = serde_json::from_value(value).map_err(|e| {
        CorpusError::InvalidField {
            field: "record".into(),
            message: e.to_string(),
        }
    })?;
    record.validate()?;
    Ok(record)
}

/// Reads a JSONL corpus. Blank lines are skipped; duplicate ids are
/// rejected.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<LabeledRecord>, CorpusError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| CorpusError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = parse_record(&line).map_err(|e| CorpusError::Line {
            line: i + 1,
            source: Box::new(e),
        })?;
        if !seen.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateId(record.id));
        }
        out.push(record);
    }
    Ok(out)
}

pub fn write_jsonl(records: &[LabeledRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_json_line());
        out.push('\n');
    }
    out
}
