use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const FILE_HEADER: &str = "#proxy-align-vocab v1";

/// Ordered n-gram vocabulary with per-phrase document frequencies.
///
/// Phrases are space-joined token n-grams, sorted lexicographically so the
/// persisted file is byte-stable for a given corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    phrases: Vec<String>,
    doc_freq: Vec<u32>,
    n_docs: u32,
    max_n: usize,
    index: HashMap<String, u32>,
    version: String,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn n_docs(&self) -> u32 {
        self.n_docs
    }

    pub fn phrases(&self) -> &[String] {
        &self.phrases
    }

    pub fn doc_freq(&self, idx: u32) -> u32 {
        self.doc_freq[idx as usize]
    }

    pub fn index_of(&self, phrase: &str) -> Option<u32> {
        self.index.get(phrase).copied()
    }

    /// Content hash identifying this vocabulary; models record it so that
    /// vectors built on a different vocabulary are rejected at predict time.
    pub fn version(&self) -> &str {
        &self.version
    }

    fn compute_version(phrases: &[String], doc_freq: &[u32], n_docs: u32, max_n: usize) -> String {
        let mut h = Fnv1a::new();
        h.update(n_docs.to_le_bytes().as_slice());
        h.update(&[max_n as u8]);
        for (p, df) in phrases.iter().zip(doc_freq) {
            h.update(p.as_bytes());
            h.update(&[0]);
            h.update(df.to_le_bytes().as_slice());
        }
        format!("{:016x}", h.finish())
    }

    /// Serialize as a versioned text file: header line, then
    /// `phrase<TAB>doc_freq`, one per line.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{FILE_HEADER} docs={} max_n={}",
            self.n_docs, self.max_n
        );
        for (p, df) in self.phrases.iter().zip(&self.doc_freq) {
            let _ = writeln!(out, "{p}\t{df}");
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_file_string())?;
        Ok(())
    }

    pub fn from_file_string(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("empty vocabulary file"))?;
        if !header.starts_with(FILE_HEADER) {
            return Err(Error::parse(format!(
                "vocabulary header mismatch: {header:?}"
            )));
        }
        let mut n_docs = 0u32;
        let mut max_n = 0usize;
        for field in header.split_whitespace() {
            if let Some(v) = field.strip_prefix("docs=") {
                n_docs = v
                    .parse()
                    .map_err(|_| Error::parse("bad docs= field in vocabulary header"))?;
            } else if let Some(v) = field.strip_prefix("max_n=") {
                max_n = v
                    .parse()
                    .map_err(|_| Error::parse("bad max_n= field in vocabulary header"))?;
            }
        }
        let mut phrases = Vec::new();
        let mut doc_freq = Vec::new();
        for (i, line) in lines.enumerate() {
            let (phrase, df) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(format!("vocabulary line {} lacks a tab", i + 2)))?;
            phrases.push(phrase.to_owned());
            doc_freq.push(
                df.parse()
                    .map_err(|_| Error::parse(format!("bad doc_freq on line {}", i + 2)))?,
            );
        }
        let index = phrases
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let version = Vocabulary::compute_version(&phrases, &doc_freq, n_docs, max_n);
        Ok(Vocabulary {
            phrases,
            doc_freq,
            n_docs,
            max_n,
            index,
            version,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Vocabulary::from_file_string(&fs::read_to_string(path)?)
    }
}

/// Build the vocabulary of all 1..=`max_n`-gram phrases whose document
/// frequency lies strictly inside (`min_df`, `max_df`) as a fraction of the
/// corpus. Both bounds are exclusive: a phrase in exactly 1% of documents
/// is omitted, as is one in exactly 70%.
pub fn build_vocabulary(
    corpus: &[Vec<String>],
    max_n: usize,
    min_df: f64,
    max_df: f64,
) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::data("cannot build a vocabulary from an empty corpus"));
    }
    if max_n == 0 {
        return Err(Error::data("max_n must be at least 1"));
    }
    let n_docs = corpus.len() as u32;
    // BTreeMap keeps phrases lexicographically sorted as they accumulate.
    let mut df: BTreeMap<String, u32> = BTreeMap::new();
    let mut seen: Vec<&str> = Vec::new();
    let mut joined = String::new();
    for doc in corpus {
        let mut doc_phrases: Vec<String> = Vec::new();
        for n in 1..=max_n {
            for window in doc.windows(n) {
                joined.clear();
                for (k, tok) in window.iter().enumerate() {
                    if k > 0 {
                        joined.push(' ');
                    }
                    joined.push_str(tok);
                }
                doc_phrases.push(joined.clone());
            }
        }
        doc_phrases.sort_unstable();
        doc_phrases.dedup();
        seen.clear();
        for p in doc_phrases {
            *df.entry(p).or_insert(0) += 1;
        }
    }
    let n = n_docs as f64;
    let mut phrases = Vec::new();
    let mut doc_freq = Vec::new();
    for (phrase, count) in df {
        let frac = count as f64 / n;
        if frac > min_df && frac < max_df {
            phrases.push(phrase);
            doc_freq.push(count);
        }
    }
    let index = phrases
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i as u32))
        .collect();
    let version = Vocabulary::compute_version(&phrases, &doc_freq, n_docs, max_n);
    Ok(Vocabulary {
        phrases,
        doc_freq,
        n_docs,
        max_n,
        index,
        version,
    })
}

/// FNV-1a, 64-bit; stable across platforms and runs.
struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Fnv1a(0xcbf29ce484222325)
    }

    fn update(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}
