//! Labeled records, JSONL I/O, generation prompts, the completions client
//! and stratified splitting.

mod client;
mod desk;
mod prompt;
mod record;
mod split;

pub use client::{generate_abstract, generate_many, GenClientConfig, GenError, DEFAULT_API_KEY_ENV};
pub use desk::{
    build_desk_corpus, bundled_abstracts, parse_abstracts, DeskAbstract, DeskConfig, DeskFold,
    DESK_GENERATOR,
};
pub use prompt::{build_prompt, PromptTemplate, TITLE_PLACEHOLDER};
pub use record::{
    parse_record, read_jsonl, write_jsonl, Domain, LabeledRecord, Source, Split, HUMAN_GENERATOR,
};
pub use split::{label_counts, split_corpus};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("missing field {0:?}")]
    MissingField(String),
    #[error("label must be 0 or 1, got {0}")]
    BadLabel(String),
    #[error("{0} has no word tokens")]
    EmptyText(String),
    #[error("invalid {field}: {message}")]
    InvalidField { field: String, message: String },
    #[error("generator {generator:?} does not match label {label}")]
    GeneratorMismatch { generator: String, label: u8 },
    #[error("duplicate record id {0:?}")]
    DuplicateId(String),
    #[error("title is empty")]
    EmptyTitle,
    #[error("need at least 2 records per label, have {ai} AI and {human} human")]
    TooFewRecords { ai: usize, human: usize },
    #[error("line {line}: {source}")]
    Line { line: usize, source: Box<CorpusError> },
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Lm(#[from] crate::lm::LmError),
}
