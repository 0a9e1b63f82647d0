use std::fmt;

use serde::{Deserialize, Serialize};

/// Binary provenance label: 0 = AI-generated, 1 = human-written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Label {
    Ai,
    Human,
}

impl Label {
    pub fn as_u8(self) -> u8 {
        match self {
            Label::Ai => 0,
            Label::Human => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.as_u8())
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Ai => Label::Human,
            Label::Human => Label::Ai,
        }
    }

    /// Label for a probability of the human class.
    pub fn from_probability(p_human: f64) -> Self {
        if p_human >= 0.5 {
            Label::Human
        } else {
            Label::Ai
        }
    }
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l.as_u8()
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            0 => Ok(Label::Ai),
            1 => Ok(Label::Human),
            other => Err(format!("label must be 0 or 1, got {other}")),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}
