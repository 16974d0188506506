use std::collections::HashSet;

use rust_stemmers::{Algorithm, Stemmer};

/// Default stop/filler word list shipped with the crate, one word per line.
const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Tokenizer/normalizer: lowercases, strips tags, punctuation and digits,
/// folds accents, drops stop and filler words, and stems what remains.
pub struct Normalizer {
    stopwords: HashSet<String>,
    stemmer: Stemmer,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer::with_stopwords(
            DEFAULT_STOPWORDS
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_owned),
        )
    }
}

impl Normalizer {
    pub fn with_stopwords(words: impl IntoIterator<Item = String>) -> Self {
        Normalizer {
            stopwords: words.into_iter().collect(),
            stemmer: Stemmer::create(Algorithm::English),
        }
    }

    /// Normalize raw text into a token list.
    ///
    /// Tokens containing no ASCII letters are dropped; stop words are
    /// removed before stemming.
    pub fn tokens(&self, text: &str) -> Vec<String> {
        let mut out = Vec::new();
        let cleaned = strip_tags(text);
        for raw in cleaned.split(|c: char| !c.is_alphanumeric()) {
            if raw.is_empty() {
                continue;
            }
            let folded: String = raw
                .chars()
                .filter_map(fold_char)
                .flat_map(|c| c.to_lowercase())
                .collect();
            if folded.is_empty() || !folded.bytes().any(|b| b.is_ascii_alphabetic()) {
                continue;
            }
            // Digits inside mixed tokens are stripped rather than splitting
            // the token ("14a" -> "a" would be noise; drop digits entirely).
            let letters: String = folded.chars().filter(|c| c.is_ascii_alphabetic()).collect();
            if letters.is_empty() || self.stopwords.contains(&letters) {
                continue;
            }
            out.push(self.stemmer.stem(&letters).into_owned());
        }
        out
    }
}

/// Normalize with the default stop list and stemmer.
pub fn normalize(text: &str) -> Vec<String> {
    Normalizer::default().tokens(text)
}

/// Remove `<...>` markup spans, replacing each with a space so that tag
/// boundaries never glue neighboring words together.
fn strip_tags(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_tag = false;
    for c in text.chars() {
        match c {
            '<' => {
                in_tag = true;
                out.push(' ');
            }
            '>' if in_tag => in_tag = false,
            c if !in_tag => out.push(c),
            _ => {}
        }
    }
    out
}

/// Fold common accented Latin characters to their ASCII base; pass ASCII
/// through; drop anything else.
fn fold_char(c: char) -> Option<char> {
    if c.is_ascii() {
        return Some(c);
    }
    let folded = match c {
        'á' | 'à' | 'â' | 'ä' | 'ã' | 'å' | 'Á' | 'À' | 'Â' | 'Ä' | 'Ã' | 'Å' => 'a',
        'é' | 'è' | 'ê' | 'ë' | 'É' | 'È' | 'Ê' | 'Ë' => 'e',
        'í' | 'ì' | 'î' | 'ï' | 'Í' | 'Ì' | 'Î' | 'Ï' => 'i',
        'ó' | 'ò' | 'ô' | 'ö' | 'õ' | 'Ó' | 'Ò' | 'Ô' | 'Ö' | 'Õ' => 'o',
        'ú' | 'ù' | 'û' | 'ü' | 'Ú' | 'Ù' | 'Û' | 'Ü' => 'u',
        'ñ' | 'Ñ' => 'n',
        'ç' | 'Ç' => 'c',
        'ý' | 'ÿ' => 'y',
        _ => return None,
    };
    Some(folded)
}
