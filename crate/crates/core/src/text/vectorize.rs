use serde::{Deserialize, Serialize};

use super::vocab::Vocabulary;

/// Sparse phrase-count vector for one document.
///
/// `counts` holds `(phrase_index, count)` pairs sorted by index, with every
/// stored count at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocVector {
    pub doc_id: String,
    pub counts: Vec<(u32, u32)>,
}

impl DocVector {
    pub fn count(&self, idx: u32) -> u32 {
        match self.counts.binary_search_by_key(&idx, |&(i, _)| i) {
            Ok(pos) => self.counts[pos].1,
            Err(_) => 0,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&(_, c)| c as u64).sum()
    }

    /// Dot product against a dense coefficient vector.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.counts
            .iter()
            .map(|&(i, c)| dense[i as usize] * c as f64)
            .sum()
    }
}

/// Count vocabulary phrases in a token list. Overlapping n-gram windows are
/// all counted: tokens `a b a b` contain the bigram `a b` twice.
pub fn vectorize(doc_id: &str, tokens: &[String], vocab: &Vocabulary) -> DocVector {
    let mut counts = std::collections::BTreeMap::new();
    let mut joined = String::new();
    for n in 1..=vocab.max_n() {
        for window in tokens.windows(n) {
            joined.clear();
            for (k, tok) in window.iter().enumerate() {
                if k > 0 {
                    joined.push(' ');
                }
                joined.push_str(tok);
            }
            if let Some(idx) = vocab.index_of(&joined) {
                *counts.entry(idx).or_insert(0u32) += 1;
            }
        }
    }
    DocVector {
        doc_id: doc_id.to_owned(),
        counts: counts.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::build_vocabulary;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    fn bigram_vocab(phrase: &str) -> Vocabulary {
        // Two docs so that df-fraction is 0.5, inside any sensible bounds.
        let corpus = vec![toks(phrase), toks("unrelated filler words")];
        build_vocabulary(&corpus, 2, 0.0, 1.1).unwrap()
    }

    #[test]
    fn counts_bigram() {
        let vocab = bigram_vocab("declassifi board");
        let v = vectorize("d1", &toks("declassifi board"), &vocab);
        let idx = vocab.index_of("declassifi board").unwrap();
        assert_eq!(v.count(idx), 1);
    }

    #[test]
    fn empty_tokens_empty_vector() {
        let vocab = bigram_vocab("a b");
        let v = vectorize("d1", &[], &vocab);
        assert!(v.counts.is_empty());
    }

    #[test]
    fn overlapping_windows_all_counted() {
        let vocab = bigram_vocab("a b");
        let v = vectorize("d1", &toks("a b a b"), &vocab);
        let idx = vocab.index_of("a b").unwrap();
        assert_eq!(v.count(idx), 2, "sliding windows: [a b], [b a], [a b]");
    }

    #[test]
    fn unigram_counts_bounded_by_token_count() {
        let vocab = bigram_vocab("a b c");
        let tokens = toks("a b c a b x");
        let v = vectorize("d1", &tokens, &vocab);
        let unigram_total: u64 = v
            .counts
            .iter()
            .filter(|&&(i, _)| !vocab.phrases()[i as usize].contains(' '))
            .map(|&(_, c)| c as u64)
            .sum();
        assert!(unigram_total <= tokens.len() as u64);
    }
}
