use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// Minimum words for a retained proposal segment.
const MIN_WORDS: usize = 30;
/// Search for the next proposal's start this many lines after the previous.
const NEXT_SEARCH_OFFSET: usize = 5;
/// Fallback segment length when no terminator phrase is found.
const FALLBACK_SEGMENT_LINES: usize = 50;
const TERMINATOR: &str = "the board of directors recommends";

/// One shareholder proposal segment matched to its voting-record row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProposalText {
    pub proposal_id: String,
    pub description: String,
    pub item_number: u32,
    pub meeting_date: NaiveDate,
    pub body: String,
    pub word_count: usize,
}

/// One voting-record row to locate in the filing. Director-election rows
/// must be pre-merged into a single row carrying every nominee name.
#[derive(Debug, Clone)]
pub struct IssRow {
    pub proposal_id: String,
    pub description: String,
    pub item_number: u32,
    pub meeting_date: NaiveDate,
    pub is_director_election: bool,
    pub nominees: Vec<String>,
}

/// Line-score weights. The cues are fixed; the weights are tunable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoreWeights {
    pub uppercase: f64,
    pub marker_word: f64,
    pub description_overlap: f64,
    pub short_line: f64,
    pub item_number: f64,
    /// Rows whose best line scores below this are reported unmatched.
    pub floor: f64,
}

impl Default for ScoreWeights {
    fn default() -> Self {
        ScoreWeights {
            uppercase: 2.0,
            marker_word: 1.0,
            description_overlap: 3.0,
            short_line: 1.0,
            item_number: 3.0,
            floor: 2.0,
        }
    }
}

/// Segmentation result: matched proposals plus the rows that never scored
/// above the floor (reported, not guessed).
#[derive(Debug, Clone, Default)]
pub struct SegmentOutcome {
    pub proposals: Vec<ProposalText>,
    pub unmatched: Vec<String>,
    /// Rows matched but dropped by the 30-word floor.
    pub too_short: Vec<String>,
}

fn words_of(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Score how likely a cleaned line is the start of the given proposal:
/// uppercase lines, marker words ("proposal", "number", "no.", "item"),
/// word overlap with the voting-record description, short lines, and a
/// matching item number all add weight.
pub fn score_proposal_line(
    line: &str,
    description: &str,
    item_number: u32,
    weights: &ScoreWeights,
) -> f64 {
    let trimmed = line.trim();
    if trimmed.is_empty() {
        return 0.0;
    }
    let mut score = 0.0;
    let has_alpha = trimmed.chars().any(|c| c.is_alphabetic());
    if has_alpha && !trimmed.chars().any(|c| c.is_lowercase()) {
        score += weights.uppercase;
    }
    let lower = trimmed.to_lowercase();
    let line_words: BTreeSet<String> = words_of(trimmed).into_iter().collect();
    for marker in ["proposal", "number", "item"] {
        if line_words.contains(marker) {
            score += weights.marker_word;
        }
    }
    if lower.contains("no.") {
        score += weights.marker_word;
    }
    let desc_words: BTreeSet<String> = words_of(description).into_iter().collect();
    if !desc_words.is_empty() && !line_words.is_empty() {
        let overlap = line_words.intersection(&desc_words).count() as f64;
        let union = line_words.union(&desc_words).count() as f64;
        score += weights.description_overlap * overlap / union;
    }
    if trimmed.len() < 80 {
        score += weights.short_line;
    }
    if line_words.contains(&item_number.to_string()) {
        score += weights.item_number;
    }
    score
}

/// Locate each voting-record row in the cleaned filing and cut its segment.
///
/// Starts are the argmax-scoring line at or after five lines past the
/// previous start, also trying two-line concatenations. Each segment ends
/// two lines before the next start; the last runs to the line before
/// "The Board of Directors recommends" or fifty lines past its start.
/// Director rows keep only lines naming a listed nominee. Segments of
/// thirty words or fewer are dropped.
pub fn segment_proposals(
    doc: &[String],
    iss_rows: &[IssRow],
    weights: &ScoreWeights,
) -> SegmentOutcome {
    let mut outcome = SegmentOutcome::default();
    if doc.is_empty() || iss_rows.is_empty() {
        outcome
            .unmatched
            .extend(iss_rows.iter().map(|r| r.proposal_id.clone()));
        return outcome;
    }

    // Pass 1: find the start line for each row in document order.
    let mut starts: Vec<(usize, &IssRow)> = Vec::new();
    let mut search_from = 0usize;
    for row in iss_rows {
        if search_from >= doc.len() {
            outcome.unmatched.push(row.proposal_id.clone());
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for i in search_from..doc.len() {
            let single = score_proposal_line(&doc[i], &row.description, row.item_number, weights);
            let candidate = if i + 1 < doc.len() {
                let joined = format!("{} {}", doc[i], doc[i + 1]);
                let double =
                    score_proposal_line(&joined, &row.description, row.item_number, weights);
                single.max(double)
            } else {
                single
            };
            if best.map_or(true, |(s, _)| candidate > s) {
                best = Some((candidate, i));
            }
        }
        match best {
            Some((score, line)) if score >= weights.floor => {
                starts.push((line, row));
                search_from = line + NEXT_SEARCH_OFFSET;
            }
            _ => {
                log::warn!(
                    "no line scored above {} for proposal {}; reported unmatched",
                    weights.floor,
                    row.proposal_id
                );
                outcome.unmatched.push(row.proposal_id.clone());
            }
        }
    }

    // Pass 2: cut segments between consecutive starts.
    for (k, (start, row)) in starts.iter().enumerate() {
        let end_incl = if k + 1 < starts.len() {
            starts[k + 1].0.saturating_sub(2)
        } else {
            let from = (start + NEXT_SEARCH_OFFSET).min(doc.len());
            let terminator = (from..doc.len())
                .find(|&i| doc[i].to_lowercase().contains(TERMINATOR));
            match terminator {
                Some(t) => t.saturating_sub(1),
                None => start + FALLBACK_SEGMENT_LINES,
            }
        };
        let end_incl = end_incl.min(doc.len() - 1).max(*start);
        let mut lines: Vec<&str> = doc[*start..=end_incl].iter().map(String::as_str).collect();
        if row.is_director_election && !row.nominees.is_empty() {
            let names: Vec<String> = row.nominees.iter().map(|n| n.to_lowercase()).collect();
            lines.retain(|l| {
                let lower = l.to_lowercase();
                names.iter().any(|n| lower.contains(n.as_str()))
            });
        }
        let body = lines.join("\n");
        let word_count = words_of(&body).len();
        if word_count <= MIN_WORDS {
            outcome.too_short.push(row.proposal_id.clone());
            continue;
        }
        outcome.proposals.push(ProposalText {
            proposal_id: row.proposal_id.clone(),
            description: row.description.clone(),
            item_number: row.item_number,
            meeting_date: row.meeting_date,
            body,
            word_count,
        });
    }
    outcome
}
