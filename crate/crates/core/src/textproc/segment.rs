/// Lowercased words that end in a period without ending a sentence.
const ABBREVIATIONS: &[&str] = &[
    "al", "approx", "ca", "cf", "co", "dept", "dr", "e.g", "eq", "eqs", "et", "etc", "fig",
    "figs", "i.e", "inc", "jr", "ltd", "mr", "mrs", "ms", "no", "nos", "pp", "prof", "ref", "refs",
    "resp", "sec", "sp", "spp", "sr", "st", "tab", "univ", "viz", "vol", "vs",
];

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, ')' | ']' | '"' | '\'' | '\u{201d}' | '\u{2019}')
}

/// The word immediately before byte offset `dot`, without leading brackets.
fn word_before(text: &str, dot: usize) -> &str {
    let head = &text[..dot];
    let start = head
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_whitespace() || matches!(c, '(' | '[' | '"'))
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(0);
    &head[start..]
}

/// Splits text into trimmed sentence spans.
///
/// A boundary is a run of `.`, `!` or `?` (plus any closing quotes or
/// brackets) followed by whitespace and an uppercase letter, or by the end of
/// the text. A period after a known abbreviation never splits.
pub fn segment_sentences(text: &str) -> Vec<&str> {
    let mut spans = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut sent_start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !is_terminator(c) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < chars.len() && is_terminator(chars[j + 1].1) {
            j += 1;
        }
        while j + 1 < chars.len() && is_closer(chars[j + 1].1) {
            j += 1;
        }
        let end = chars[j].0 + chars[j].1.len_utf8();

        let mut k = j + 1;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let at_end = k == chars.len();
        let boundary = at_end || (k > j + 1 && chars[k].1.is_uppercase());
        let abbreviation = c == '.'
            && ABBREVIATIONS.contains(&word_before(text, pos).to_lowercase().as_str());

        if boundary && !abbreviation {
            let span = text[sent_start..end].trim();
            if !span.is_empty() {
                spans.push(span);
            }
            sent_start = end;
        }
        i = j + 1;
    }
    let tail = text[sent_start..].trim();
    if !tail.is_empty() {
        spans.push(tail);
    }
    spans
}
