use std::path::Path;

use regex::RegexBuilder;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::clean::clean_html_with;

const DEFAULT_CUES: &str = include_str!("../../data/message_cues.tsv");

/// How many leading cleaned lines the topical screens inspect.
const SCREEN_WINDOW: usize = 40;

/// Keyword screen for filings that are merger, litigation, or back-and-forth
/// banter rather than a message to shareholders.
const OFF_TOPIC_KEYWORDS: [&str; 4] = [
    "merger agreement",
    "tender offer",
    "complaint",
    "litigation",
];

/// Phrases indicating the filing body merely points at an exhibit document.
const EXHIBIT_REFERENCE_PHRASES: [&str; 4] = [
    "attached as exhibit",
    "refer to exhibit",
    "incorporated by reference to exhibit",
    "see exhibit",
];

/// Ordered begin/end cue pairs with `{ACTIVIST}`/`{TARGET}` placeholders.
#[derive(Debug, Clone)]
pub struct CueTable {
    pairs: Vec<(String, String)>,
}

impl Default for CueTable {
    fn default() -> Self {
        CueTable::parse(DEFAULT_CUES).expect("bundled cue table parses")
    }
}

impl CueTable {
    pub fn parse(content: &str) -> Result<CueTable> {
        let mut pairs = Vec::new();
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (begin, end) = line.split_once('\t').ok_or_else(|| {
                Error::parse(format!("cue table line {} lacks a tab", lineno + 1))
            })?;
            pairs.push((begin.trim().to_owned(), end.trim().to_owned()));
        }
        if pairs.is_empty() {
            return Err(Error::data("cue table has no pairs"));
        }
        Ok(CueTable { pairs })
    }

    pub fn load(path: &Path) -> Result<CueTable> {
        CueTable::parse(&std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Extracted message with provenance flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MessageExtract {
    pub text: String,
    /// Set when a begin cue matched but no end cue followed, so the tail of
    /// the document was taken.
    pub low_confidence: bool,
}

/// Cue pattern -> regex: placeholders expand to the filer/subject names,
/// whitespace is elastic, matching is case-insensitive. Returns `None` for
/// cues whose placeholder has no name available.
fn cue_regex(pattern: &str, activist: &str, target: &str) -> Option<regex::Regex> {
    if (pattern.contains("{ACTIVIST}") && activist.is_empty())
        || (pattern.contains("{TARGET}") && target.is_empty())
    {
        return None;
    }
    let substituted = pattern
        .replace("{ACTIVIST}", activist)
        .replace("{TARGET}", target);
    let escaped: Vec<String> = substituted
        .split_whitespace()
        .map(regex::escape)
        .collect();
    if escaped.is_empty() {
        return None;
    }
    RegexBuilder::new(&escaped.join(r"\s+"))
        .case_insensitive(true)
        .build()
        .ok()
}

/// Extract the activist's message to shareholders from a raw proxy filing.
///
/// The body is cleaned (without head/tail trims), screened for empty,
/// exhibit-only, and off-topic filings, then cut between the earliest
/// begin-cue match and the first end-cue match after it. A begin cue with
/// no following end cue takes the document tail, flagged low-confidence.
pub fn extract_message(
    body: &str,
    activist_name: &str,
    target_name: &str,
    cues: &CueTable,
) -> Option<MessageExtract> {
    let lines = clean_html_with(body, 0, 0);
    if lines.is_empty() {
        return None;
    }
    let head = lines
        .iter()
        .take(SCREEN_WINDOW)
        .map(|l| l.to_lowercase())
        .collect::<Vec<_>>()
        .join("\n");
    if EXHIBIT_REFERENCE_PHRASES.iter().any(|p| head.contains(p)) {
        return None;
    }
    if OFF_TOPIC_KEYWORDS.iter().any(|p| head.contains(p)) {
        return None;
    }
    let text = lines.join("\n");
    if !text.chars().any(|c| c.is_alphabetic()) {
        return None;
    }

    // Earliest begin cue; position ties break toward longer matches, then
    // cue order.
    let mut begin: Option<(usize, usize)> = None; // (start, end)
    for (pattern, _) in &cues.pairs {
        let Some(re) = cue_regex(pattern, activist_name, target_name) else {
            continue;
        };
        if let Some(m) = re.find(&text) {
            let better = match begin {
                None => true,
                Some((s, e)) => m.start() < s || (m.start() == s && m.end() > e),
            };
            if better {
                begin = Some((m.start(), m.end()));
            }
        }
    }
    let (_, begin_end) = begin?;

    let mut end: Option<(usize, usize)> = None;
    for (_, pattern) in &cues.pairs {
        let Some(re) = cue_regex(pattern, activist_name, target_name) else {
            continue;
        };
        if let Some(m) = re.find(&text[begin_end..]) {
            let abs = (begin_end + m.start(), begin_end + m.end());
            let better = match end {
                None => true,
                Some((s, e)) => abs.0 < s || (abs.0 == s && abs.1 > e),
            };
            if better {
                end = Some(abs);
            }
        }
    }

    match end {
        Some((end_start, _)) => {
            let message = text[begin_end..end_start].trim().to_owned();
            if message.is_empty() {
                None
            } else {
                Some(MessageExtract {
                    text: message,
                    low_confidence: false,
                })
            }
        }
        None => {
            let message = text[begin_end..].trim().to_owned();
            if message.is_empty() {
                None
            } else {
                log::warn!("begin cue without end cue; taking document tail");
                Some(MessageExtract {
                    text: message,
                    low_confidence: true,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dear_shareholder_sincerely() {
        let body = "\
Some preamble about the filing.
Dear Fellow Shareholder:
We believe the board has failed you.
Vote the GOLD proxy card.
Sincerely,
The Activist Fund
";
        let m = extract_message(body, "Activist Fund", "Target Co", &CueTable::default()).unwrap();
        assert!(m.text.contains("board has failed"));
        assert!(m.text.contains("GOLD proxy card"));
        assert!(!m.text.to_lowercase().contains("sincerely"));
        assert!(!m.low_confidence);
    }

    #[test]
    fn message_is_substring_of_cleaned_input() {
        let body = "Dear Fellow Shareholder: vote for change now please. Sincerely, Us";
        let cleaned = clean_html_with(body, 0, 0).join("\n");
        let m = extract_message(body, "", "", &CueTable::default()).unwrap();
        assert!(cleaned.contains(&m.text));
    }

    #[test]
    fn exhibit_reference_returns_none() {
        let body = "\
The information required is attached as Exhibit 99.1 to this filing.
";
        assert!(extract_message(body, "A", "T", &CueTable::default()).is_none());
    }

    #[test]
    fn merger_banter_screened() {
        let body = "\
This filing relates to the proposed merger agreement between the parties.
Dear Fellow Shareholder:
irrelevant
Sincerely,
";
        assert!(extract_message(body, "A", "T", &CueTable::default()).is_none());
    }

    #[test]
    fn empty_body_none() {
        assert!(extract_message("", "A", "T", &CueTable::default()).is_none());
    }

    #[test]
    fn missing_end_cue_takes_tail_flagged() {
        let body = "\
Ladies and Gentlemen:
We write to explain our nominees and the change your company needs.
No closing salutation appears in this document.
";
        let m = extract_message(body, "A", "T", &CueTable::default()).unwrap();
        assert!(m.low_confidence);
        assert!(m.text.contains("nominees"));
    }

    #[test]
    fn placeholder_cues_use_names() {
        let body = "\
Preliminary material follows here.
Big Activist LP is seeking your support for the following actions at the meeting.
We urge change immediately and without delay in the composition of the board.
Please sign date and return the gold proxy card today
";
        let m = extract_message(body, "Big Activist LP", "Target Co", &CueTable::default()).unwrap();
        assert!(m.text.contains("urge change"));
        assert!(!m.text.contains("gold proxy card today"));
    }
}
