/// Lowercase, split on non-alphanumeric characters, drop empty tokens.
///
/// No stemming and no stopword removal: query-simulation math stays
/// transparent when the token stream is the raw surface vocabulary.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowercases_and_splits() {
        assert_eq!(
            tokenize("Hubble Telescope's Achievements, 1991!"),
            vec!["hubble", "telescope", "s", "achievements", "1991"]
        );
    }

    #[test]
    fn empty_and_punctuation_only() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("--- ...").is_empty());
    }
}
