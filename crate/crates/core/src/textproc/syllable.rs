fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group syllable heuristic: count maximal runs of `aeiouy`, drop a
/// final silent `e` (but keep consonant + `le`), never return less than 1.
/// Compounds such as `state-of-the-art` are counted part by part.
pub fn count_syllables(word: &str) -> usize {
    let total: usize = word
        .split(['-', '\u{2013}', '/'])
        .filter(|part| part.chars().any(char::is_alphabetic))
        .map(count_part)
        .sum();
    total.max(1)
}

fn count_part(part: &str) -> usize {
    let letters: Vec<char> = part
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();

    let mut groups = 0usize;
    let mut in_group = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }

    let n = letters.len();
    if n >= 2 && letters[n - 1] == 'e' && !is_vowel(letters[n - 2]) {
        let consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}
