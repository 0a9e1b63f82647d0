use super::token::{Token, TokenKind};

const PUNCTUATION: &[char] = &[
    '.', ',', ';', ':', '!', '?', '(', ')', '[', ']', '{', '}', '"', '\'', '\u{201c}', '\u{201d}',
    '\u{2018}', '\u{2019}', '\u{ab}', '\u{bb}', '\u{2026}', '-', '\u{2013}', '\u{2014}',
];

const SYMBOLS: &[char] = &[
    '%', '+', '=', '<', '>', '~', '*', '/', '\\', '$', '#', '@', '&', '^', '|', '\u{b1}', '\u{d7}',
    '\u{2264}', '\u{2265}', '\u{b0}',
];

pub(crate) fn is_punctuation(c: char) -> bool {
    PUNCTUATION.contains(&c)
}

fn is_symbol(c: char) -> bool {
    SYMBOLS.contains(&c)
}

fn detachable(c: char) -> Option<TokenKind> {
    if is_punctuation(c) {
        Some(TokenKind::Punctuation)
    } else if is_symbol(c) {
        Some(TokenKind::Symbol)
    } else {
        None
    }
}

/// `123`, `3.14`, `1,000` and `2.5.1`-style digit groups.
fn is_number(s: &str) -> bool {
    let mut prev_digit = false;
    let mut any = false;
    for c in s.chars() {
        if c.is_ascii_digit() {
            prev_digit = true;
            any = true;
        } else if (c == '.' || c == ',') && prev_digit {
            prev_digit = false;
        } else {
            return false;
        }
    }
    any && prev_digit
}

fn classify_core(core: &str) -> TokenKind {
    if is_number(core) {
        TokenKind::Number
    } else if core.chars().any(char::is_alphabetic) {
        TokenKind::Word
    } else if core.chars().all(is_punctuation) {
        TokenKind::Punctuation
    } else {
        TokenKind::Symbol
    }
}

/// Whitespace tokenizer with punctuation detachment.
///
/// Leading and trailing punctuation or symbol characters become one token
/// each; whatever remains in the middle (including internal hyphens,
/// apostrophes and decimal points) is a single word, number or symbol token.
/// Every token carries the tag forced by its kind; words are tagged later.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && detachable(chars[start]).is_some() {
            start += 1;
        }
        while end > start && detachable(chars[end - 1]).is_some() {
            end -= 1;
        }
        for &c in &chars[..start] {
            out.push(Token::new(c.to_string(), detachable(c).unwrap()));
        }
        if start < end {
            let core: String = chars[start..end].iter().collect();
            let kind = classify_core(&core);
            out.push(Token::new(core, kind));
        }
        for &c in &chars[end..] {
            out.push(Token::new(c.to_string(), detachable(c).unwrap()));
        }
    }
    out
}

/// Joins token surfaces back into readable text: closing punctuation
/// attaches to the previous token, opening brackets to the next one.
pub fn detokenize<'a, I>(surfaces: I) -> String
where
    I: IntoIterator<Item = &'a str>,
{
    let mut out = String::new();
    let mut glue_next = false;
    for s in surfaces {
        let attach_left = matches!(
            s,
            "." | "," | ";" | ":" | "!" | "?" | ")" | "]" | "}" | "%" | "\u{201d}" | "\u{2019}"
        );
        if !out.is_empty() && !attach_left && !glue_next {
            out.push(' ');
        }
        out.push_str(s);
        glue_next = matches!(s, "(" | "[" | "{" | "\u{201c}" | "\u{2018}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<(String, TokenKind)> {
        tokenize(text)
            .into_iter()
            .map(|t| (t.surface, t.kind))
            .collect()
    }

    #[test]
    fn sentence_with_period() {
        assert_eq!(
            kinds("The cat sat."),
            vec![
                ("The".into(), TokenKind::Word),
                ("cat".into(), TokenKind::Word),
                ("sat".into(), TokenKind::Word),
                (".".into(), TokenKind::Punctuation),
            ]
        );
    }

    #[test]
    fn hyphenated_word_stays_whole() {
        assert_eq!(
            kinds("state-of-the-art"),
            vec![("state-of-the-art".into(), TokenKind::Word)]
        );
    }

    #[test]
    fn decimal_is_number() {
        assert_eq!(kinds("3.14"), vec![("3.14".into(), TokenKind::Number)]);
        assert_eq!(kinds("1,000"), vec![("1,000".into(), TokenKind::Number)]);
    }

    #[test]
    fn brackets_and_percent_detach() {
        assert_eq!(
            kinds("(95%),"),
            vec![
                ("(".into(), TokenKind::Punctuation),
                ("95".into(), TokenKind::Number),
                ("%".into(), TokenKind::Symbol),
                (")".into(), TokenKind::Punctuation),
                (",".into(), TokenKind::Punctuation),
            ]
        );
    }

    #[test]
    fn apostrophe_inside_word() {
        assert_eq!(kinds("don't"), vec![("don't".into(), TokenKind::Word)]);
    }

    #[test]
    fn number_with_trailing_period() {
        assert_eq!(
            kinds("was 12."),
            vec![
                ("was".into(), TokenKind::Word),
                ("12".into(), TokenKind::Number),
                (".".into(), TokenKind::Punctuation),
            ]
        );
    }

    #[test]
    fn empty_and_whitespace() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  \n\t ").is_empty());
    }

    #[test]
    fn detokenize_attaches_punctuation() {
        let toks = tokenize("We saw (a) gain of 5%, then stopped.");
        let text = detokenize(toks.iter().map(|t| t.surface.as_str()));
        assert_eq!(text, "We saw (a) gain of 5%, then stopped.");
    }
}
