use serde::Serialize;

use super::{CorpusError, Domain};

pub const TITLE_PLACEHOLDER: &str = "TITLE";

/// Structured-abstract prompt for one domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromptTemplate {
    pub domain: Domain,
    pub sections: [&'static str; 5],
    pub template_text: String,
}

impl PromptTemplate {
    pub fn for_domain(domain: Domain) -> Self {
        let sections = match domain {
            Domain::Bio => ["Background", "Objectives", "Methods", "Results", "Conclusions"],
            Domain::Cs => ["Background", "Motivation", "Methods", "Results", "Conclusions"],
        };
        let template_text = format!(
            "Write an abstract for the scientific paper titled with \"{TITLE_PLACEHOLDER}\" \
             with distinct, labeled sections ({})",
            sections.join(", ")
        );
        Self {
            domain,
            sections,
            template_text,
        }
    }

    /// Substitutes the title verbatim; the title itself is never rescanned
    /// for placeholders.
    pub fn render(&self, title: &str) -> Result<String, CorpusError> {
        if title.trim().is_empty() {
            return Err(CorpusError::EmptyTitle);
        }
        let (head, tail) = self
            .template_text
            .split_once(TITLE_PLACEHOLDER)
            .expect("template has a placeholder");
        Ok(format!("{head}{title}{tail}"))
    }
}

pub fn build_prompt(title: &str, domain: Domain) -> Result<String, CorpusError> {
    PromptTemplate::for_domain(domain).render(title)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn published_templates() {
        assert_eq!(
            build_prompt("X", Domain::Bio).unwrap(),
            "Write an abstract for the scientific paper titled with \"X\" with distinct, \
             labeled sections (Background, Objectives, Methods, Results, Conclusions)"
        );
        assert_eq!(
            build_prompt("X", Domain::Cs).unwrap(),
            "Write an abstract for the scientific paper titled with \"X\" with distinct, \
             labeled sections (Background, Motivation, Methods, Results, Conclusions)"
        );
    }

    #[test]
    fn empty_title() {
        assert_eq!(build_prompt("", Domain::Bio), Err(CorpusError::EmptyTitle));
        assert_eq!(build_prompt("  ", Domain::Cs), Err(CorpusError::EmptyTitle));
    }

    #[test]
    fn title_with_placeholder_text() {
        let p = build_prompt("TITLE \"quoted\"", Domain::Cs).unwrap();
        assert!(p.contains("titled with \"TITLE \"quoted\"\" with"));
    }

    proptest! {
        #[test]
        fn title_and_sections_appear_once(title in "[A-Za-z0-9 :,\\-]{1,60}", bio in any::<bool>()) {
            prop_assume!(!title.trim().is_empty());
            let domain = if bio { Domain::Bio } else { Domain::Cs };
            let p = build_prompt(&title, domain).unwrap();
            let quoted = format!("\"{title}\"");
            prop_assert_eq!(p.matches(&quoted).count(), 1);
            let sections = format!("({})", PromptTemplate::for_domain(domain).sections.join(", "));
            prop_assert!(p.ends_with(&sections));
        }
    }
}
